#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "asnp/rational.hpp"

namespace asnp {

// element of Q(zeta_p), p an odd prime or 2, on the power basis 1, zeta, ..., zeta^(p-2);
// all arithmetic reduces modulo the p-th cyclotomic polynomial
struct CycNum {
    std::uint32_t p = 0;
    std::vector<mpq_class> c;  // size p-1

    CycNum() = default;
    explicit CycNum(std::uint32_t p_) : p(p_), c(p_ - 1, mpq_class(0)) {}

    bool is_zero() const;
    bool operator==(const CycNum& o) const { return p == o.p && c == o.c; }
    bool operator!=(const CycNum& o) const { return !(*this == o); }
};

CycNum cyc_from_rat(std::uint32_t p, const mpq_class& v);
CycNum cyc_zeta_pow(std::uint32_t p, std::uint64_t e);  // zeta^e reduced

CycNum cyc_add(const CycNum&, const CycNum&);
CycNum cyc_sub(const CycNum&, const CycNum&);
CycNum cyc_neg(const CycNum&);
CycNum cyc_mul(const CycNum&, const CycNum&);
CycNum cyc_scal(const CycNum&, const mpq_class&);
CycNum cyc_inv(const CycNum&);
CycNum cyc_galois(const CycNum&, std::uint32_t k);  // zeta -> zeta^k, p does not divide k

// true when every coordinate is a rational integer (element of Z[zeta_p])
bool cyc_is_integral(const CycNum&);

// sum_t counts[t] * zeta^t, counts indexed by exponent 0..p-1
CycNum zeta_power_combination(std::uint32_t p, const std::vector<long long>& counts);

// field norm down to Q of an element with integer coordinates
mpz_class cyc_norm_integral(const CycNum&);

// p-adic valuation normalized with v(p) = 1; v(0) = +infinity; values in (1/(p-1)) Z
ExtRational valuation(const CycNum&);

std::string cyc_str(const CycNum&);

// exact integer determinant, fraction-free elimination
mpz_class det_bareiss(std::vector<std::vector<mpz_class>> m);

}  // namespace asnp
