#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "asnp/fields.hpp"

namespace asnp {

// Multivariate polynomials in A_1..A_d over Q.  Monomials are exponent
// vectors (m_1..m_d); the map is ordered descending in the lexicographic
// order with A_d heaviest, so begin() is the leading term.
struct MonomialOrder {
    bool operator()(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    }
};

struct MultiPoly {
    std::uint32_t d = 0;
    std::map<std::vector<std::uint32_t>, mpq_class, MonomialOrder> terms;  // no zero coefficients stored

    bool is_zero() const { return terms.empty(); }
};

MultiPoly mp_zero(std::uint32_t d);
MultiPoly mp_variable(std::uint32_t d, std::uint32_t k);  // A_k
void mp_add_term(MultiPoly&, const std::vector<std::uint32_t>& expo, const mpq_class& c);
MultiPoly mp_add(const MultiPoly&, const MultiPoly&);
MultiPoly mp_mul(const MultiPoly&, const MultiPoly&);
MultiPoly mp_scal(const MultiPoly&, const mpq_class&);

// total degree of a homogeneous polynomial; rejects inhomogeneous or zero input
std::uint32_t homogeneous_degree(const MultiPoly&);

mpq_class mp_eval(const MultiPoly&, const std::vector<mpq_class>& a);

// coefficient-wise reduction mod p followed by evaluation at a point of F_q;
// every coefficient denominator must be a p-unit
FqElem mp_eval_mod(const MultiPoly&, const std::vector<FqElem>& a);

// reduction mod p of every coefficient, zero residues dropped; denominators
// must be p-units
std::map<std::vector<std::uint32_t>, std::uint64_t, MonomialOrder> mp_reduce_mod(const MultiPoly&,
                                                                                 std::uint64_t p);

// stable text form: one ("m_1,...,m_d", "num/den") pair per term, leading first
std::vector<std::pair<std::string, std::string>> mp_serialized(const MultiPoly&);

// Generic-polynomial factors for the degree-d one-variable family, at a fixed
// residue class r prime to d.

// H entry: supported on exponent vectors with sum(k<d) (d-k) m_k = r_ij and
// sum m_k = d, with falling-product coefficients; nonzero homogeneous of
// total degree d
MultiPoly h_tilde(std::uint32_t d, std::uint32_t r, std::uint32_t i, std::uint32_t j);

// signed sum of the H products over the cost-minimizing permutations of the
// n x n residue block; nonzero homogeneous of total degree n*d
MultiPoly f_tilde(std::uint32_t d, std::uint32_t r, std::uint32_t n);

// greedy layered permutation: pairs with residue 0 first, then residue 1 on
// the remaining rows/columns, and so on; always one of the cost minimizers.
// returned 0-based: row i maps to column sigma[i]
std::vector<std::uint32_t> sigma0(std::uint32_t d, std::uint32_t r, std::uint32_t n);

// checks that the leading monomial of det(H) is the closed-form monomial read
// off sigma0's layer sizes, and that it survives in f_tilde
bool leading_term_certificate(std::uint32_t d, std::uint32_t r, std::uint32_t n);

struct FactorSet {
    std::uint32_t d = 0, r = 0;
    struct Factor {
        std::string label;
        MultiPoly poly;
    };
    std::vector<Factor> factors;  // A_d, then H(i,j) row-major, then f_n for n <= d-2
};

FactorSet psi_factors(std::uint32_t d, std::uint32_t r);

// multinomial polynomial supported on sum k*m_k = p*i - j, sum m_k =
// ceil((p*i - j)/d); homogeneous of that ceiling degree
MultiPoly k_tilde(std::uint32_t d, std::uint32_t p, std::uint32_t i, std::uint32_t j);

// congruence K(i,j) == v_i * A_d^(deg shift) * H(i,j) mod p with
// v_i = 1/ceil((p*i-1)/d)!; requires p >= (d^2+1)(d-1)
bool check_key2(std::uint32_t d, std::uint32_t p, std::uint32_t i, std::uint32_t j);

struct MembershipReport {
    bool in_U = false;
    std::string failing_factor;  // empty when in_U
};

// evaluates every factor for every residue class r prime to d at the
// rational point a_1..a_d; membership means all values nonzero
MembershipReport membership_U(const std::vector<mpq_class>& a);

struct HeightReport {
    unsigned long floor_ = 0;  // (d^2+1)(d-1)
    std::vector<mpz_class> bad_primes;
    mpz_class bound;
    bool complete = true;  // false when some factor value resisted factorization
};

// bad primes: divisors of coefficient denominators, plus primes q dividing a
// factor value of the residue class q mod d; bound = max(floor, largest bad
// prime, any unfactored cofactor)
HeightReport height_bound(const std::vector<mpq_class>& a);

// mod-p shadow of the unit-value condition: a_d != 0, all H(i,j) and all f_n
// (n <= d-2) nonzero at the point of F_q^d, for r = p mod d; requires
// p >= (d^2+1)(d-1)
bool ordinary_certificate(const std::vector<FqElem>& a);

}  // namespace asnp
