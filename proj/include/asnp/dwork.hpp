#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "asnp/cyclo.hpp"
#include "asnp/genpoly.hpp"
#include "asnp/polygon.hpp"
#include "asnp/rational.hpp"

namespace asnp {

// Truncated Artin-Hasse exponential exp(sum_{p^k <= N} x^{p^k}/p^k).
// Every coefficient is p-integral, and e_m = 1/m! for m < p.
struct ArtinHasseSeries {
    std::uint32_t p = 0;
    std::uint32_t trunc = 0;   // N
    std::vector<mpq_class> e;  // e_0 .. e_N
};

ArtinHasseSeries artin_hasse_coeffs(std::uint32_t p, std::uint32_t N);

// Leading gamma-order model of the n-th series coefficient of
// prod_{i<=d} E(A_i gamma x^i): the coefficient is gamma^c * lead plus terms
// of gamma-order > c, where c = ceil(n/d) is the minimal monomial count with
// sum k*m_k = n.  Exactness of the 1/m_k! coefficients needs every m_k in the
// minimal stratum to stay below p; violations are rejected.
struct GnLeading {
    std::uint32_t c = 0;
    MultiPoly lead;
};

GnLeading g_n_leading(std::uint32_t d, std::uint64_t p, std::uint64_t n);

// gamma^gexp * value with gamma kept formal: v(gamma) = 1/(p-1), so the
// valuation is gexp/(p-1) + v(value).  gamma is never rewritten in terms of
// zeta_p; everything downstream consumes only valuations.
struct GammaScaled {
    long gexp = 0;
    CycNum value;  // carries p; zero value means the scaled element is zero
};

GammaScaled gs_make(long gexp, CycNum value);
GammaScaled gs_from_rat(std::uint32_t p, long gexp, const mpq_class& v);
ExtRational gs_valuation(const GammaScaled&);

// t x t block of a nuclear matrix together with declared tail bounds: every
// undisclosed row i > t promises inf_j v(m_ij) >= tail[i-t-1], tail
// nondecreasing with tail[0] >= 1, so the slope-<1 part of the
// characteristic series is determined by the block.
struct TruncatedMatrix {
    std::uint32_t p = 0;
    std::uint32_t t = 0;
    std::vector<GammaScaled> entries;  // row-major
    std::vector<mpq_class> tail;

    const GammaScaled& at(std::uint32_t i, std::uint32_t j) const;  // 1-based
};

TruncatedMatrix tm_make(std::uint32_t p, std::uint32_t t, std::vector<GammaScaled> entries,
                        std::vector<mpq_class> tail);

// 1 + sum_{n=1}^t det(leading n x n block) s^n; index n holds the
// s^n coefficient.  Each determinant must collapse to a single gamma power
// (automatic when every row carries one gamma exponent).
std::vector<GammaScaled> q_aux_poly(const TruncatedMatrix&);

// Finite check of the slope-<1 transfer at b = 1: hypotheses are
//   (1) inf_j v(m_ij) >= h_i for every row,
//   (2) v(det leading n x n block) < h_1+...+h_n + delta/2 for n <= t,
// under the frame h_1 < ... < h_t < 1 <= tail, consecutive gaps >= delta.
// When they hold, the slope-<1 polygon of det(1 - M s) equals the polygon of
// the auxiliary polynomial; failed hypotheses short-circuit `equal`.
struct TransformReport {
    bool hypotheses_hold = false;
    NewtonPolygon np_det;
    NewtonPolygon np_q;
    bool equal = false;
};

TransformReport np_transform_check(const TruncatedMatrix&, const std::vector<mpq_class>& h,
                                   const mpq_class& delta);

// Deterministic hypothesis-satisfying instance on the valuation grid of
// Q(zeta_p): row i is gamma^{g_i} times random units of Z[zeta_p], with h,
// delta, and the tail picked so the gap frame holds; draws are retried until
// hypothesis (2) holds.
struct TransformInstance {
    TruncatedMatrix m;
    std::vector<mpq_class> h;
    mpq_class delta;
    std::uint32_t draws = 0;  // attempts consumed, successful one included
};

TransformInstance random_transform_instance(std::uint32_t p, std::uint32_t t, std::uint64_t seed);

}  // namespace asnp
