#include "asnp/dwork.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <utility>

#include "asnp/check.hpp"

namespace asnp {

namespace {

int permutation_sign(const std::vector<std::uint32_t>& s) {
    int inv = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] > s[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

// finite sum of gamma^g * v_g, gamma kept formal; v_g in Q(zeta_p)
using GammaPoly = std::map<long, CycNum>;

void gp_add(GammaPoly& acc, long gexp, const CycNum& v) {
    if (v.is_zero()) return;
    auto it = acc.find(gexp);
    if (it == acc.end()) {
        acc.emplace(gexp, v);
        return;
    }
    it->second = cyc_add(it->second, v);
    if (it->second.is_zero()) acc.erase(it);
}

// min over components of gexp/(p-1) + v(value): a lower bound in general,
// and the exact valuation whenever a single component strictly dominates
// (in particular under the transform hypotheses)
ExtRational gp_valuation(const GammaPoly& g, std::uint32_t p) {
    ExtRational best = ExtRational::infinity();
    for (const auto& [gexp, v] : g) {
        ExtRational cand = ExtRational(mpq_class(gexp, long(p) - 1)) + valuation(v);
        if (cand < best) best = cand;
    }
    return best;
}

// signed sum over permutations of the principal block given by rows (0-based)
GammaPoly det_gamma(const TruncatedMatrix& m, const std::vector<std::uint32_t>& rows) {
    GammaPoly det;
    std::vector<std::uint32_t> perm(rows.size());
    for (std::uint32_t k = 0; k < rows.size(); ++k) perm[k] = k;
    do {
        long gexp = 0;
        CycNum v = cyc_from_rat(m.p, permutation_sign(perm));
        for (std::size_t k = 0; k < rows.size() && !v.is_zero(); ++k) {
            const GammaScaled& e = m.at(rows[k] + 1, rows[perm[k]] + 1);
            gexp += e.gexp;
            v = cyc_mul(v, e.value);
        }
        gp_add(det, gexp, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

GammaScaled collapse(const GammaPoly& g, std::uint32_t p) {
    if (g.empty()) return gs_make(0, CycNum(p));
    require(g.size() == 1, "collapse: determinant mixes gamma exponents");
    return gs_make(g.begin()->first, g.begin()->second);
}

void stratum_rec(std::uint32_t d, std::uint64_t p, std::uint32_t k, std::uint64_t weight,
                 std::uint32_t count, std::vector<std::uint32_t>& m, MultiPoly& lead,
                 mpq_class coeff) {
    if (k == d) {
        // the last variable absorbs whatever remains, one unit of count per d of weight
        if (weight != std::uint64_t(d) * count) return;
        require(count <= p - 1, "g_n_leading: minimal stratum leaves the exact-factorial range");
        m[d - 1] = count;
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), count);
        mp_add_term(lead, m, coeff / mpq_class(f));
        m[d - 1] = 0;
        return;
    }
    for (std::uint32_t mk = 0;; ++mk) {
        std::uint64_t used = std::uint64_t(k) * mk;
        if (mk > count || used > weight) break;
        std::uint64_t wrem = weight - used;
        std::uint32_t crem = count - mk;
        if (wrem < std::uint64_t(k + 1) * crem || wrem > std::uint64_t(d) * crem) continue;
        require(mk <= p - 1, "g_n_leading: minimal stratum leaves the exact-factorial range");
        m[k - 1] = mk;
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), mk);
        stratum_rec(d, p, k + 1, wrem, crem, m, lead, coeff / mpq_class(f));
        m[k - 1] = 0;
    }
}

CycNum random_cyc_unit(std::uint32_t p, std::mt19937_64& rng) {
    for (;;) {
        CycNum u(p);
        for (auto& c : u.c) c = mpq_class(long(rng() % 9) - 4);
        if (valuation(u) == ExtRational(0, 1)) return u;
    }
}

}  // namespace

ArtinHasseSeries artin_hasse_coeffs(std::uint32_t p, std::uint32_t N) {
    require(p >= 2, "artin_hasse_coeffs: p must be at least 2");
    require(N >= 1, "artin_hasse_coeffs: truncation must be at least 1");
    ArtinHasseSeries s;
    s.p = p;
    s.trunc = N;
    s.e.assign(N + 1, mpq_class(0));
    s.e[0] = 1;
    // from E' = (sum_k x^{p^k - 1}) E: n e_n = sum over p^k <= n of e_{n - p^k}
    for (std::uint32_t n = 1; n <= N; ++n) {
        mpq_class acc(0);
        for (std::uint64_t pk = 1; pk <= n; pk *= p) acc += s.e[n - pk];
        s.e[n] = acc / mpq_class(n);
    }
    mpz_class fact(1);
    for (std::uint32_t m = 0; m <= N; ++m) {
        ensure(mpz_gcd_ui(nullptr, s.e[m].get_den().get_mpz_t(), p) == 1,
               "artin_hasse_coeffs: coefficient not p-integral");
        if (m < p) {
            if (m > 0) fact *= m;
            ensure(s.e[m] == mpq_class(1) / mpq_class(fact),
                   "artin_hasse_coeffs: low coefficient differs from 1/m!");
        }
    }
    return s;
}

GnLeading g_n_leading(std::uint32_t d, std::uint64_t p, std::uint64_t n) {
    require(d >= 1, "g_n_leading: d must be positive");
    require(p >= 2, "g_n_leading: p must be at least 2");
    require(n >= 1, "g_n_leading: n must be positive");
    GnLeading out;
    std::uint64_t c = (n + d - 1) / d;
    require(c <= 0xffffffffu, "g_n_leading: stratum degree overflow");
    out.c = std::uint32_t(c);
    out.lead = mp_zero(d);
    std::vector<std::uint32_t> m(d, 0);
    stratum_rec(d, p, 1, n, out.c, m, out.lead, mpq_class(1));
    ensure(!out.lead.is_zero(), "g_n_leading: empty minimal stratum");
    ensure(homogeneous_degree(out.lead) == out.c, "g_n_leading: stratum degree mismatch");
    return out;
}

GammaScaled gs_make(long gexp, CycNum value) {
    require(value.p >= 2, "gs_make: value must carry its cyclotomic field");
    GammaScaled g;
    g.gexp = gexp;
    g.value = std::move(value);
    return g;
}

GammaScaled gs_from_rat(std::uint32_t p, long gexp, const mpq_class& v) {
    return gs_make(gexp, cyc_from_rat(p, v));
}

ExtRational gs_valuation(const GammaScaled& g) {
    if (g.value.is_zero()) return ExtRational::infinity();
    return ExtRational(mpq_class(g.gexp, long(g.value.p) - 1)) + valuation(g.value);
}

const GammaScaled& TruncatedMatrix::at(std::uint32_t i, std::uint32_t j) const {
    require(1 <= i && i <= t && 1 <= j && j <= t, "TruncatedMatrix: index out of range");
    return entries[std::size_t(i - 1) * t + (j - 1)];
}

TruncatedMatrix tm_make(std::uint32_t p, std::uint32_t t, std::vector<GammaScaled> entries,
                        std::vector<mpq_class> tail) {
    require(t >= 1, "tm_make: size must be positive");
    require(entries.size() == std::size_t(t) * t, "tm_make: entry count mismatch");
    for (const auto& e : entries) require(e.value.p == p, "tm_make: entry field mismatch");
    require(!tail.empty(), "tm_make: declared tail bounds missing");
    require(tail.front() >= 1, "tm_make: tail bounds must start at 1 or above");
    for (std::size_t k = 1; k < tail.size(); ++k)
        require(tail[k] >= tail[k - 1], "tm_make: tail bounds must be nondecreasing");
    TruncatedMatrix m;
    m.p = p;
    m.t = t;
    m.entries = std::move(entries);
    m.tail = std::move(tail);
    return m;
}

std::vector<GammaScaled> q_aux_poly(const TruncatedMatrix& m) {
    std::vector<GammaScaled> q;
    q.push_back(gs_from_rat(m.p, 0, 1));
    std::vector<std::uint32_t> rows;
    for (std::uint32_t n = 1; n <= m.t; ++n) {
        rows.push_back(n - 1);
        q.push_back(collapse(det_gamma(m, rows), m.p));
    }
    return q;
}

TransformReport np_transform_check(const TruncatedMatrix& m, const std::vector<mpq_class>& h,
                                   const mpq_class& delta) {
    require(h.size() == m.t, "np_transform_check: one bound per disclosed row");
    require(delta > 0, "np_transform_check: delta must be positive");
    for (std::size_t k = 0; k + 1 < h.size(); ++k)
        require(h[k + 1] - h[k] >= delta, "np_transform_check: row bounds must climb by delta");
    require(h.back() < 1, "np_transform_check: last disclosed bound must stay below one");
    require(m.tail.front() - h.back() >= delta,
            "np_transform_check: tail must clear the last bound by delta");

    TransformReport rep;
    rep.hypotheses_hold = true;
    for (std::uint32_t i = 1; i <= m.t; ++i)
        for (std::uint32_t j = 1; j <= m.t; ++j)
            if (gs_valuation(m.at(i, j)) < ExtRational(h[i - 1])) rep.hypotheses_hold = false;

    std::vector<GammaScaled> q = q_aux_poly(m);
    mpq_class hsum(0);
    for (std::uint32_t n = 1; n <= m.t; ++n) {
        hsum += h[n - 1];
        if (!(gs_valuation(q[n]) < ExtRational(mpq_class(hsum + delta / 2))))
            rep.hypotheses_hold = false;
    }

    // characteristic series of the block: the s^n coefficient is, up to sign,
    // the sum of all principal n x n minors; valuations of the sums are exact
    // whenever the hypotheses hold (the leading block strictly dominates)
    std::vector<std::pair<long, ExtRational>> det_pts{{0, ExtRational(0, 1)}};
    for (std::uint32_t n = 1; n <= m.t; ++n) {
        GammaPoly acc;
        std::vector<std::uint32_t> rows(n);
        std::vector<bool> pick(m.t, false);
        std::fill(pick.begin(), pick.begin() + n, true);
        do {
            std::uint32_t k = 0;
            for (std::uint32_t i = 0; i < m.t; ++i)
                if (pick[i]) rows[k++] = i;
            for (const auto& [gexp, v] : det_gamma(m, rows)) gp_add(acc, gexp, v);
        } while (std::prev_permutation(pick.begin(), pick.end()));
        det_pts.emplace_back(long(n), gp_valuation(acc, m.p));
    }
    rep.np_det = truncate_lt_one(hull_from_values(det_pts));

    std::vector<std::pair<long, ExtRational>> q_pts;
    for (std::uint32_t n = 0; n <= m.t; ++n) q_pts.emplace_back(long(n), gs_valuation(q[n]));
    rep.np_q = hull_from_values(q_pts);

    rep.equal = rep.hypotheses_hold && rep.np_det == rep.np_q;
    return rep;
}

TransformInstance random_transform_instance(std::uint32_t p, std::uint32_t t, std::uint64_t seed) {
    require(p == 5 || p == 7, "random_transform_instance: configured for p in {5, 7}");
    require(t == 3 || t == 4, "random_transform_instance: configured for t in {3, 4}");
    TransformInstance inst;
    if (p == 5) {
        inst.h = t == 3 ? std::vector<mpq_class>{mpq_class(1, 4), mpq_class(1, 2), mpq_class(3, 4)}
                        : std::vector<mpq_class>{mpq_class(0), mpq_class(1, 4), mpq_class(1, 2),
                                                 mpq_class(3, 4)};
        inst.delta = mpq_class(1, 4);
    } else if (t == 3) {
        inst.h = {mpq_class(1, 6), mpq_class(1, 2), mpq_class(5, 6)};
        inst.delta = mpq_class(1, 3);
    } else {
        inst.h = {mpq_class(1, 6), mpq_class(1, 3), mpq_class(1, 2), mpq_class(2, 3)};
        inst.delta = mpq_class(1, 6);
    }
    std::vector<mpq_class> tail{inst.h.back() + inst.delta};
    if (tail.front() < 1) tail.front() = 1;

    std::vector<long> g(t);
    for (std::uint32_t i = 0; i < t; ++i) {
        mpq_class scaled = inst.h[i] * mpq_class(long(p) - 1);
        require(scaled.get_den() == 1, "random_transform_instance: bound off the valuation grid");
        g[i] = long(scaled.get_num().get_si());
    }

    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + p * 131 + t);
    for (inst.draws = 1; inst.draws <= 500; ++inst.draws) {
        std::vector<std::vector<CycNum>> u(t);
        for (auto& row : u)
            for (std::uint32_t j = 0; j < t; ++j) row.push_back(random_cyc_unit(p, rng));
        // hypothesis (2) on this grid says exactly that every leading block of
        // the unit part has unit determinant
        bool ok = true;
        for (std::uint32_t n = 1; n <= t && ok; ++n) {
            std::vector<std::uint32_t> perm(n);
            for (std::uint32_t k = 0; k < n; ++k) perm[k] = k;
            CycNum det(p);
            do {
                CycNum term = cyc_from_rat(p, permutation_sign(perm));
                for (std::uint32_t k = 0; k < n; ++k) term = cyc_mul(term, u[k][perm[k]]);
                det = cyc_add(det, term);
            } while (std::next_permutation(perm.begin(), perm.end()));
            ok = valuation(det) == ExtRational(0, 1);
        }
        if (!ok) continue;
        std::vector<GammaScaled> entries;
        for (std::uint32_t i = 0; i < t; ++i)
            for (std::uint32_t j = 0; j < t; ++j) entries.push_back(gs_make(g[i], u[i][j]));
        inst.m = tm_make(p, t, std::move(entries), tail);
        return inst;
    }
    ensure(false, "random_transform_instance: no hypothesis-satisfying draw in 500 attempts");
    std::abort();
}

}  // namespace asnp
