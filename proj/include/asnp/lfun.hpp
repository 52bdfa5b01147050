#pragma once

#include <cstdint>
#include <vector>

#include "asnp/cyclo.hpp"
#include "asnp/fields.hpp"
#include "asnp/polygon.hpp"

namespace asnp {

// f(x) = a_1 x + ... + a_d x^d over F_q; no constant term, a_d != 0, d >= 3,
// and d prime to the characteristic (the degree-(d-1) L-function shape and the
// genus formula both presume it)
struct PolyOverFq {
    Field field;
    std::vector<FqElem> coeffs;  // coeffs[i-1] = a_i

    std::uint32_t degree() const { return static_cast<std::uint32_t>(coeffs.size()); }
};

PolyOverFq make_poly(const Field&, std::vector<FqElem> coeffs);

// entries are reduced into the prime field; denominators must be prime to p
PolyOverFq poly_from_rationals(const Field&, const std::vector<mpq_class>& a);

PolyOverFq embed_poly(const PolyOverFq&, const Field& to);

// pre: x lies in the same field as the coefficients
FqElem poly_eval(const PolyOverFq&, const FqElem& x);

// counts[t] = #{x in F_{q^k} : Tr_abs(alpha f(x)) = t}; alpha nonzero, in the
// coefficient field; merge order never affects the counts
std::vector<std::uint64_t> exp_sum_histogram(const PolyOverFq& f, std::uint32_t k, const FqElem& alpha,
                                             unsigned threads = 0);

// S(k) = sum over F_{q^k} of zeta_p^(Tr(alpha f(x)))
CycNum exp_sum(const PolyOverFq& f, std::uint32_t k, const FqElem& alpha, unsigned threads = 0);

// the same sum evaluated through the rank-ell character written as a product
// over a basis of F_{p^ell} with exponents n_i; slow elementwise path kept as
// an independent cross-check of the alpha reduction
CycNum exp_sum_dual_form(const PolyOverFq& f, std::uint32_t k, std::uint32_t ell,
                         const std::vector<std::uint32_t>& n_exps, const std::vector<FqElem>& basis);

struct LPolyOptions {
    // a vanishing check at degree n runs only when q^n is at most this
    std::uint64_t degree_check_budget = std::uint64_t(1) << 22;
    unsigned threads = 0;
};

// 1 + c_1 s + ... + c_{d-1} s^(d-1) with integral cyclotomic coefficients
struct LPolynomial {
    std::uint32_t p = 0;
    std::uint32_t b = 0;  // q = p^b
    std::vector<CycNum> coeffs;
    // degrees n in {d, d+1, d+2} where the recurrence was extended and c_n = 0 verified
    std::vector<std::uint32_t> degree_checks_run;

    std::uint32_t degree() const { return static_cast<std::uint32_t>(coeffs.size()) - 1; }
};

LPolynomial l_poly(const PolyOverFq& f, const FqElem& alpha, const LPolyOptions& = {});

struct RankEllResult {
    LPolynomial L;
    FqElem alpha;
};

// reduces the rank-ell L-function to rank one: the character with exponents
// n_1..n_ell on the dual of the given basis of F_{p^ell} equals
// zeta_p^(Tr(alpha .)) for alpha = sum n_i c_i
RankEllResult l_poly_rank_ell(const PolyOverFq& f, std::uint32_t ell, const std::vector<std::uint32_t>& n_exps,
                              const std::vector<FqElem>& basis, const LPolyOptions& = {});

// lower hull of (i, v(c_i)/b); asserts width d-1 and endpoint (d-1, (d-1)/2)
NewtonPolygon np_of_l(const LPolynomial&);

struct AlphaScanEntry {
    FqElem alpha;
    LPolynomial L;
    NewtonPolygon np;
};

// L-polynomials of alpha f for every nonzero alpha in the degree-ell subfield,
// in subfield enumeration order
std::vector<AlphaScanEntry> alpha_scan(const PolyOverFq& f, std::uint32_t ell, const LPolyOptions& = {});

struct LStructure {
    std::uint32_t degree = 0;
    bool endpoint_ok = false;            // v_q(c_{d-1}) = (d-1)/2
    bool slopes_in_unit_interval = false;
    bool above_hodge = false;
    // against the asymptotic generic reference polygon, which is a true lower
    // bound only for p large; small-p instances can genuinely sit below it
    bool above_generic = false;
    std::vector<std::uint32_t> degree_checks_run;

    bool all_ok() const { return endpoint_ok && slopes_in_unit_interval && above_hodge && above_generic; }
};

LStructure l_structure_report(const LPolynomial&);

}  // namespace asnp
