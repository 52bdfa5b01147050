#pragma once

#include <cstdint>
#include <vector>

#include "asnp/polygon.hpp"

namespace asnp {

// residue tables behind the generic polygon vertex formulas, for x^d families
// and their one-parameter subfamilies; indices i, j run over 1..d-1
struct ResidueTables {
    std::uint32_t d = 0, r = 0;  // r prime to d, 1 <= r < d
    std::vector<std::vector<std::uint32_t>> rij;     // (-(r*i - j)) mod d
    std::vector<std::vector<std::uint32_t>> rij_pr;  // (r*i - j) mod d

    std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return rij[i - 1][j - 1]; }
    std::uint32_t at_pr(std::uint32_t i, std::uint32_t j) const { return rij_pr[i - 1][j - 1]; }
};

ResidueTables residue_tables(std::uint32_t d, std::uint32_t r);

// exact min-cost bijection over an n x n cost matrix
long long assignment_min_value(const std::vector<std::vector<long long>>& cost);

struct AssignmentResult {
    long long value = 0;
    // each minimizer maps row i to column sigma[i], 0-based
    std::vector<std::vector<std::uint32_t>> minimizers;
};

// value plus the complete set of minimizing permutations
AssignmentResult assignment_min(const std::vector<std::vector<long long>>& cost);

// cost matrix for M_n: the n x n leading block of the residue table
std::vector<std::vector<long long>> m_cost_matrix(const ResidueTables&, std::uint32_t n, bool primed);

struct GnpResult {
    NewtonPolygon polygon;       // lower hull of the vertex formula
    bool vertices_degenerate = false;  // some claimed vertex failed to be a hull vertex
    std::vector<long long> m_values;   // M_1..M_{d-1}
};

// generic polygon of the full degree-d family over F_p; pre: p prime, p does not divide d
GnpResult gnp_full(std::uint32_t d, std::uint32_t p);

// generic polygon of the one-parameter subfamily x^d + a x
GnpResult gnp_one_param(std::uint32_t d, std::uint32_t p);

// lower bound polygon with vertices (n, n(n+1)/(2d))
NewtonPolygon hodge(std::uint32_t d);

// curve-level bound: slopes of the (p^ell - 1)-dilation of hodge(d)
SlopeMultiset hodge_curve(std::uint32_t d, std::uint32_t p, std::uint32_t ell);

// first differences eps_i = M_i - M_{i-1}; asserts -(i-1)(d-1) <= eps_i <= i(d-1)
// and that they sum to zero
std::vector<long long> epsilon_slopes(std::uint32_t d, std::uint32_t p);

}  // namespace asnp
