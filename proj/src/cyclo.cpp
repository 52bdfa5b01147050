#include "asnp/cyclo.hpp"

#include <sstream>

#include "asnp/check.hpp"
#include "asnp/intutil.hpp"

namespace asnp {

namespace {

void check_p(std::uint32_t p) { require(p >= 2 && is_prime64(p), "CycNum: p must be prime"); }

// fold exponent buckets 0..p-1 onto the power basis using zeta^(p-1) = -(1+...+zeta^(p-2))
CycNum fold(std::uint32_t p, std::vector<mpq_class>& bucket) {
    CycNum r(p);
    for (std::uint32_t i = 0; i + 1 < p; ++i) r.c[i] = bucket[i] - bucket[p - 1];
    return r;
}

}  // namespace

bool CycNum::is_zero() const {
    for (const auto& v : c)
        if (v != 0) return false;
    return true;
}

CycNum cyc_from_rat(std::uint32_t p, const mpq_class& v) {
    check_p(p);
    CycNum r(p);
    r.c[0] = v;
    return r;
}

CycNum cyc_zeta_pow(std::uint32_t p, std::uint64_t e) {
    check_p(p);
    std::vector<mpq_class> bucket(p, mpq_class(0));
    bucket[e % p] = 1;
    return fold(p, bucket);
}

CycNum cyc_add(const CycNum& a, const CycNum& b) {
    require(a.p == b.p, "CycNum: p mismatch");
    CycNum r(a.p);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

CycNum cyc_sub(const CycNum& a, const CycNum& b) {
    require(a.p == b.p, "CycNum: p mismatch");
    CycNum r(a.p);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

CycNum cyc_neg(const CycNum& a) {
    CycNum r(a.p);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = -a.c[i];
    return r;
}

CycNum cyc_mul(const CycNum& a, const CycNum& b) {
    require(a.p == b.p, "CycNum: p mismatch");
    std::uint32_t p = a.p;
    std::vector<mpq_class> bucket(p, mpq_class(0));
    for (std::uint32_t i = 0; i + 1 < p; ++i) {
        if (a.c[i] == 0) continue;
        for (std::uint32_t j = 0; j + 1 < p; ++j) {
            if (b.c[j] == 0) continue;
            std::uint32_t e = i + j;
            if (e >= p) e -= p;
            bucket[e] += a.c[i] * b.c[j];
        }
    }
    return fold(p, bucket);
}

CycNum cyc_scal(const CycNum& a, const mpq_class& s) {
    CycNum r(a.p);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] * s;
    return r;
}

CycNum cyc_galois(const CycNum& a, std::uint32_t k) {
    require(k % a.p != 0, "cyc_galois: k must be prime to p");
    std::uint32_t p = a.p;
    std::vector<mpq_class> bucket(p, mpq_class(0));
    for (std::uint32_t i = 0; i + 1 < p; ++i) bucket[std::uint64_t(i) * k % p] += a.c[i];
    return fold(p, bucket);
}

bool cyc_is_integral(const CycNum& a) {
    for (const auto& v : a.c)
        if (v.get_den() != 1) return false;
    return true;
}

CycNum zeta_power_combination(std::uint32_t p, const std::vector<long long>& counts) {
    check_p(p);
    require(counts.size() == p, "zeta_power_combination: need one count per exponent 0..p-1");
    std::vector<mpq_class> bucket(p, mpq_class(0));
    for (std::uint32_t t = 0; t < p; ++t) bucket[t] = mpq_class(static_cast<long>(counts[t]));
    return fold(p, bucket);
}

mpz_class det_bareiss(std::vector<std::vector<mpz_class>> m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    for (const auto& row : m) require(row.size() == n, "det_bareiss: matrix must be square");
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

namespace {

// multiplication-by-zeta on the power basis
CycNum shift_zeta(const CycNum& a) {
    std::uint32_t p = a.p;
    CycNum r(p);
    const mpq_class& top = a.c[p - 2];
    for (std::uint32_t i = 0; i + 1 < p; ++i) {
        r.c[i] = (i == 0 ? mpq_class(0) : a.c[i - 1]) - top;
    }
    return r;
}

}  // namespace

mpz_class cyc_norm_integral(const CycNum& a) {
    require(cyc_is_integral(a), "cyc_norm_integral: element must have integer coordinates");
    std::uint32_t n = a.p - 1;
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
    CycNum col = a;
    for (std::uint32_t j = 0; j < n; ++j) {
        for (std::uint32_t i = 0; i < n; ++i) m[i][j] = col.c[i].get_num();
        if (j + 1 < n) col = shift_zeta(col);
    }
    return det_bareiss(std::move(m));
}

ExtRational valuation(const CycNum& a) {
    if (a.is_zero()) return ExtRational::infinity();
    // clear denominators: v(a) = v(den * a) - v_p(den)
    mpz_class den = 1;
    for (const auto& v : a.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
    CycNum b = cyc_scal(a, mpq_class(den));
    ensure(cyc_is_integral(b), "valuation: denominator clearing failed");
    mpz_class nrm = cyc_norm_integral(b);
    ensure(nrm != 0, "valuation: zero norm for nonzero element");
    mpz_class pz(static_cast<unsigned long>(a.p));
    mpz_class tmp;
    mp_bitcnt_t vnorm = mpz_remove(tmp.get_mpz_t(), nrm.get_mpz_t(), pz.get_mpz_t());
    mp_bitcnt_t vden = mpz_remove(tmp.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
    mpq_class v(static_cast<long>(vnorm), static_cast<long>(a.p - 1));
    v.canonicalize();
    v -= static_cast<long>(vden);
    return ExtRational(v);
}

CycNum cyc_inv(const CycNum& a) {
    require(!a.is_zero(), "cyc_inv: division by zero");
    // solve (mult-by-a) x = 1 over Q
    std::uint32_t n = a.p - 1;
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1, mpq_class(0)));
    CycNum col = a;
    for (std::uint32_t j = 0; j < n; ++j) {
        for (std::uint32_t i = 0; i < n; ++i) m[i][j] = col.c[i];
        if (j + 1 < n) col = shift_zeta(col);
    }
    m[0][n] = 1;
    for (std::uint32_t k = 0; k < n; ++k) {
        std::uint32_t piv = k;
        while (piv < n && m[piv][k] == 0) ++piv;
        ensure(piv < n, "cyc_inv: singular multiplication matrix");
        std::swap(m[k], m[piv]);
        mpq_class d = m[k][k];
        for (std::uint32_t j = k; j <= n; ++j) m[k][j] /= d;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0) continue;
            mpq_class f = m[i][k];
            for (std::uint32_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    CycNum x(a.p);
    for (std::uint32_t i = 0; i < n; ++i) x.c[i] = m[i][n];
    ensure(cyc_mul(a, x) == cyc_from_rat(a.p, 1), "cyc_inv: verification failed");
    return x;
}

std::string cyc_str(const CycNum& a) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (i) os << ",";
        os << a.c[i].get_str();
    }
    os << "]@Q(zeta_" << a.p << ")";
    return os.str();
}

}  // namespace asnp
