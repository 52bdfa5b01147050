#include "asnp/genpoly.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "asnp/check.hpp"
#include "asnp/gnp.hpp"
#include "asnp/intutil.hpp"

namespace asnp {

namespace {

int permutation_sign(const std::vector<std::uint32_t>& s) {
    int inv = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] > s[j]) ++inv;
    return (inv & 1) ? -1 : 1;
}

// vectors m >= 0 with sum_{k<d} (d-k) m_k = target and sum_k m_k = d;
// m_d absorbs the slack
std::vector<std::vector<std::uint32_t>> enumerate_m_set(std::uint32_t d, std::uint32_t target) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> m(d, 0);
    // recurse over m_1..m_{d-1}
    auto rec = [&](auto&& self, std::uint32_t k, std::uint32_t left, std::uint32_t used) -> void {
        if (k == d) {
            if (left == 0 && used <= d) {
                m[d - 1] = d - used;
                out.push_back(m);
            }
            return;
        }
        std::uint32_t w = d - k;  // weight of m_k
        for (std::uint32_t v = 0; v * w <= left && used + v <= d; ++v) {
            m[k - 1] = v;
            self(self, k + 1, left - v * w, used + v);
        }
        m[k - 1] = 0;
    };
    rec(rec, 1, target, 0);
    return out;
}

// vectors m >= 0 with sum_k k m_k = weight and sum_k m_k = count
std::vector<std::vector<std::uint32_t>> enumerate_n_set(std::uint32_t d, std::uint64_t weight,
                                                        std::uint64_t count) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> m(d, 0);
    auto rec = [&](auto&& self, std::uint32_t k, std::uint64_t w, std::uint64_t c) -> void {
        if (k == 1) {
            // m_1 carries weight 1 each, so it must be exactly the leftover
            if (w == c) {
                m[0] = static_cast<std::uint32_t>(c);
                out.push_back(m);
            }
            return;
        }
        // with weights 1..k the leftover must satisfy c <= w <= k*c
        for (std::uint32_t v = 0; v <= c && static_cast<std::uint64_t>(v) * k <= w; ++v) {
            std::uint64_t w2 = w - static_cast<std::uint64_t>(v) * k, c2 = c - v;
            if (w2 < c2 || w2 > c2 * (k - 1)) continue;
            m[k - 1] = v;
            self(self, k - 1, w2, c2);
        }
        m[k - 1] = 0;
    };
    rec(rec, d, weight, count);
    return out;
}

mpz_class factorial(std::uint32_t n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

std::uint64_t reduce_rational(const mpq_class& v, std::uint64_t p) {
    std::uint64_t nr = mpz_fdiv_ui(v.get_num().get_mpz_t(), p);
    std::uint64_t dr = mpz_fdiv_ui(v.get_den().get_mpz_t(), p);
    require(dr != 0, "reduce_rational: denominator divisible by p");
    return nr * invmod64(dr, p) % p;
}

std::vector<MultiPoly> h_block(std::uint32_t d, std::uint32_t r, std::uint32_t n) {
    std::vector<MultiPoly> h;
    h.reserve(static_cast<std::size_t>(n) * n);
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j) h.push_back(h_tilde(d, r, i, j));
    return h;
}

MultiPoly det_of_block(std::uint32_t d, std::uint32_t n, const std::vector<MultiPoly>& h) {
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    MultiPoly det = mp_zero(d);
    do {
        MultiPoly prod = h[perm[0]];
        for (std::uint32_t i = 1; i < n; ++i) prod = mp_mul(prod, h[static_cast<std::size_t>(i) * n + perm[i]]);
        det = mp_add(det, mp_scal(prod, mpq_class(permutation_sign(perm))));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

struct LayeredAssignment {
    std::vector<std::uint32_t> sigma;        // 0-based
    std::vector<std::uint32_t> layer_sizes;  // indexed by residue value 0..d-1
};

LayeredAssignment layered_assignment(const ResidueTables& rt, std::uint32_t n) {
    const std::uint32_t d = rt.d;
    LayeredAssignment la;
    la.sigma.assign(n, n);
    la.layer_sizes.assign(d, 0);
    std::vector<bool> row_used(n, false), col_used(n, false);
    for (std::uint32_t k = 0; k < d; ++k) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> layer;
        for (std::uint32_t i = 1; i <= n; ++i)
            for (std::uint32_t j = 1; j <= n; ++j)
                if (!row_used[i - 1] && !col_used[j - 1] && rt.at(i, j) == k) layer.emplace_back(i - 1, j - 1);
        for (const auto& [i, j] : layer) {
            ensure(!row_used[i] && !col_used[j], "layered_assignment: layer is not a matching");
            row_used[i] = col_used[j] = true;
            la.sigma[i] = j;
        }
        la.layer_sizes[k] = static_cast<std::uint32_t>(layer.size());
    }
    for (std::uint32_t i = 0; i < n; ++i) ensure(la.sigma[i] < n, "layered_assignment: row left unmatched");
    return la;
}

// trial division to the bound, with early exit once the cofactor is prime;
// primes land in `primes`, an unfactorable cofactor in `caps`
void collect_prime_divisors(mpz_class v, std::set<mpz_class>& primes, std::vector<mpz_class>& caps) {
    v = abs(v);
    if (v <= 1) return;
    const unsigned long kTrialBound = 10'000'000UL;
    auto extract = [&](unsigned long q) {
        if (mpz_divisible_ui_p(v.get_mpz_t(), q)) {
            primes.insert(mpz_class(q));
            do mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), q);
            while (mpz_divisible_ui_p(v.get_mpz_t(), q));
        }
    };
    extract(2);
    extract(3);
    for (unsigned long q = 5; q <= kTrialBound; q += 6) {
        if (mpz_class(q) * q > v) break;
        extract(q);
        extract(q + 2);
    }
    if (v == 1) return;
    if (v.fits_ulong_p()) {
        for (const auto& [q, e] : factor64(v.get_ui())) primes.insert(mpz_class(q));
        return;
    }
    if (mpz_class(v) < mpz_class(kTrialBound) * kTrialBound || mpz_probab_prime_p(v.get_mpz_t(), 40) > 0) {
        primes.insert(v);
        return;
    }
    caps.push_back(v);
}

}  // namespace

MultiPoly mp_zero(std::uint32_t d) {
    require(d >= 1, "mp_zero: need at least one variable");
    MultiPoly p;
    p.d = d;
    return p;
}

MultiPoly mp_variable(std::uint32_t d, std::uint32_t k) {
    require(k >= 1 && k <= d, "mp_variable: index out of range");
    MultiPoly p = mp_zero(d);
    std::vector<std::uint32_t> e(d, 0);
    e[k - 1] = 1;
    p.terms.emplace(std::move(e), mpq_class(1));
    return p;
}

void mp_add_term(MultiPoly& p, const std::vector<std::uint32_t>& expo, const mpq_class& c) {
    require(expo.size() == p.d, "mp_add_term: exponent vector has the wrong arity");
    if (c == 0) return;
    auto it = p.terms.find(expo);
    if (it == p.terms.end()) {
        p.terms.emplace(expo, c);
        return;
    }
    it->second += c;
    if (it->second == 0) p.terms.erase(it);
}

MultiPoly mp_add(const MultiPoly& a, const MultiPoly& b) {
    require(a.d == b.d, "mp_add: arity mismatch");
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms) mp_add_term(out, e, c);
    return out;
}

MultiPoly mp_mul(const MultiPoly& a, const MultiPoly& b) {
    require(a.d == b.d, "mp_mul: arity mismatch");
    MultiPoly out = mp_zero(a.d);
    std::vector<std::uint32_t> e(a.d);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            for (std::uint32_t k = 0; k < a.d; ++k) e[k] = ea[k] + eb[k];
            mp_add_term(out, e, mpq_class(ca * cb));
        }
    return out;
}

MultiPoly mp_scal(const MultiPoly& a, const mpq_class& c) {
    MultiPoly out = mp_zero(a.d);
    if (c == 0) return out;
    for (const auto& [e, v] : a.terms) out.terms.emplace(e, mpq_class(v * c));
    return out;
}

std::uint32_t homogeneous_degree(const MultiPoly& p) {
    require(!p.is_zero(), "homogeneous_degree: zero polynomial");
    std::uint32_t deg = 0;
    bool first = true;
    for (const auto& [e, c] : p.terms) {
        std::uint32_t s = std::accumulate(e.begin(), e.end(), 0u);
        if (first) {
            deg = s;
            first = false;
        } else {
            require(s == deg, "homogeneous_degree: polynomial is not homogeneous");
        }
    }
    return deg;
}

mpq_class mp_eval(const MultiPoly& p, const std::vector<mpq_class>& a) {
    require(a.size() == p.d, "mp_eval: point has the wrong arity");
    mpq_class total = 0;
    for (const auto& [e, c] : p.terms) {
        mpq_class t = c;
        for (std::uint32_t k = 0; k < p.d; ++k)
            for (std::uint32_t rep = 0; rep < e[k]; ++rep) t *= a[k];
        total += t;
    }
    return total;
}

FqElem mp_eval_mod(const MultiPoly& p, const std::vector<FqElem>& a) {
    require(a.size() == p.d, "mp_eval_mod: point has the wrong arity");
    require(!a.empty(), "mp_eval_mod: empty point");
    const Field F = a[0].field;
    for (const FqElem& x : a) require(x.field == F, "mp_eval_mod: mixed fields");
    FqElem total = fq_zero(F);
    for (const auto& [e, c] : p.terms) {
        FqElem t = fq_from_int(F, static_cast<long>(reduce_rational(c, F->p)));
        for (std::uint32_t k = 0; k < p.d; ++k)
            if (e[k] > 0) t = t * fq_pow(a[k], e[k]);
        total = total + t;
    }
    return total;
}

std::map<std::vector<std::uint32_t>, std::uint64_t, MonomialOrder> mp_reduce_mod(const MultiPoly& p,
                                                                                 std::uint64_t pr) {
    std::map<std::vector<std::uint32_t>, std::uint64_t, MonomialOrder> out;
    for (const auto& [e, c] : p.terms) {
        std::uint64_t r = reduce_rational(c, pr);
        if (r != 0) out.emplace(e, r);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> mp_serialized(const MultiPoly& p) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(p.terms.size());
    for (const auto& [e, c] : p.terms) {
        std::string key;
        for (std::uint32_t k = 0; k < p.d; ++k) {
            if (k) key += ',';
            key += std::to_string(e[k]);
        }
        out.emplace_back(std::move(key), c.get_num().get_str() + "/" + c.get_den().get_str());
    }
    return out;
}

MultiPoly h_tilde(std::uint32_t d, std::uint32_t r, std::uint32_t i, std::uint32_t j) {
    require(d >= 3, "h_tilde: d must be at least 3");
    require(i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1, "h_tilde: indices must lie in 1..d-1");
    ResidueTables rt = residue_tables(d, r);
    const std::uint32_t rij = rt.at(i, j);
    const std::uint32_t ri1 = rt.at(i, 1);
    const std::uint32_t ri1_pr = rt.at_pr(i, 1);
    // ceiling drop of (p*i - j)/d relative to j = 1, expressed through the
    // residue (p*i - 1) mod d = ri1_pr; when that residue is 0 the ceiling
    // never drops across j = 1..d-1
    const std::uint32_t delta = (ri1_pr >= 1 && j >= ri1_pr + 1) ? 1 : 0;

    mpq_class base(static_cast<long>(ri1) - 1, static_cast<long>(d));
    base.canonicalize();

    auto support = enumerate_m_set(d, rij);
    MultiPoly h = mp_zero(d);
    for (const auto& m : support) {
        std::uint32_t s = std::accumulate(m.begin(), m.end() - 1, 0u);
        mpq_class c = 1;
        for (std::uint32_t l = 0; l < s + delta; ++l) c *= mpq_class(base - l);
        for (std::uint32_t k = 0; k + 1 < d; ++k) c /= mpq_class(factorial(m[k]));
        ensure(c != 0, "h_tilde: vanishing coefficient");
        h.terms.emplace(m, c);
    }
    ensure(h.terms.size() == support.size(), "h_tilde: support does not match the index set");
    ensure(homogeneous_degree(h) == d, "h_tilde: wrong total degree");
    return h;
}

MultiPoly f_tilde(std::uint32_t d, std::uint32_t r, std::uint32_t n) {
    require(n >= 1 && n <= d - 1, "f_tilde: n must lie in 1..d-1");
    ResidueTables rt = residue_tables(d, r);
    AssignmentResult am = assignment_min(m_cost_matrix(rt, n, false));
    std::vector<MultiPoly> h = h_block(d, r, n);
    MultiPoly f = mp_zero(d);
    for (const auto& sigma : am.minimizers) {
        MultiPoly prod = h[sigma[0]];
        for (std::uint32_t i = 1; i < n; ++i) prod = mp_mul(prod, h[static_cast<std::size_t>(i) * n + sigma[i]]);
        f = mp_add(f, mp_scal(prod, mpq_class(permutation_sign(sigma))));
    }
    ensure(!f.is_zero(), "f_tilde: the minimizing sum cancelled to zero");
    ensure(homogeneous_degree(f) == n * d, "f_tilde: wrong total degree");
    return f;
}

std::vector<std::uint32_t> sigma0(std::uint32_t d, std::uint32_t r, std::uint32_t n) {
    require(n >= 1 && n <= d - 1, "sigma0: n must lie in 1..d-1");
    ResidueTables rt = residue_tables(d, r);
    LayeredAssignment la = layered_assignment(rt, n);
    long long cost = 0;
    for (std::uint32_t i = 0; i < n; ++i) cost += rt.at(i + 1, la.sigma[i] + 1);
    ensure(cost == assignment_min_value(m_cost_matrix(rt, n, false)), "sigma0: layered permutation is not a minimizer");
    return la.sigma;
}

bool leading_term_certificate(std::uint32_t d, std::uint32_t r, std::uint32_t n) {
    require(n >= 1 && n <= d - 1, "leading_term_certificate: n must lie in 1..d-1");
    ResidueTables rt = residue_tables(d, r);
    LayeredAssignment la = layered_assignment(rt, n);
    (void)sigma0(d, r, n);  // also certifies minimality

    // closed-form monomial from the layer sizes
    std::vector<std::uint32_t> xi(d, 0);
    xi[d - 1] = (d - 1) * n + la.layer_sizes[0];
    for (std::uint32_t k = 1; k < d; ++k) xi[d - 1 - k] = la.layer_sizes[k];

    std::vector<MultiPoly> h = h_block(d, r, n);
    MultiPoly det = det_of_block(d, n, h);
    if (det.is_zero()) return false;
    if (det.terms.begin()->first != xi) return false;

    MultiPoly f = f_tilde(d, r, n);
    auto it = f.terms.find(xi);
    if (it == f.terms.end()) return false;
    return it->second == det.terms.begin()->second;
}

FactorSet psi_factors(std::uint32_t d, std::uint32_t r) {
    require(d >= 3, "psi_factors: d must be at least 3");
    FactorSet fs;
    fs.d = d;
    fs.r = r;
    fs.factors.push_back({"A_d", mp_variable(d, d)});
    for (std::uint32_t i = 1; i <= d - 1; ++i)
        for (std::uint32_t j = 1; j <= d - 1; ++j)
            fs.factors.push_back({"H(r=" + std::to_string(r) + ",i=" + std::to_string(i) + ",j=" + std::to_string(j) + ")",
                                  h_tilde(d, r, i, j)});
    for (std::uint32_t n = 1; n + 1 <= d - 1; ++n)
        fs.factors.push_back({"f(r=" + std::to_string(r) + ",n=" + std::to_string(n) + ")", f_tilde(d, r, n)});
    ensure(fs.factors.size() == 1 + static_cast<std::size_t>(d - 1) * (d - 1) + (d - 2),
           "psi_factors: wrong factor count");
    for (const auto& f : fs.factors) ensure(!f.poly.is_zero(), "psi_factors: zero factor");
    return fs;
}

MultiPoly k_tilde(std::uint32_t d, std::uint32_t p, std::uint32_t i, std::uint32_t j) {
    require(d >= 3, "k_tilde: d must be at least 3");
    require(i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1, "k_tilde: indices must lie in 1..d-1");
    require(is_prime64(p) && std::gcd(p, d) == 1, "k_tilde: p must be a prime not dividing d");
    const std::uint64_t weight = static_cast<std::uint64_t>(p) * i - j;
    const std::uint64_t count = (weight + d - 1) / d;
    MultiPoly k = mp_zero(d);
    for (const auto& m : enumerate_n_set(d, weight, count)) {
        mpq_class c = 1;
        for (std::uint32_t t = 0; t < d; ++t) c /= mpq_class(factorial(m[t]));
        k.terms.emplace(m, c);
    }
    ensure(!k.is_zero(), "k_tilde: empty support");
    ensure(homogeneous_degree(k) == count, "k_tilde: wrong total degree");
    return k;
}

bool check_key2(std::uint32_t d, std::uint32_t p, std::uint32_t i, std::uint32_t j) {
    require(d >= 3, "check_key2: d must be at least 3");
    require(i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1, "check_key2: indices must lie in 1..d-1");
    require(is_prime64(p) && std::gcd(p, d) == 1, "check_key2: p must be a prime not dividing d");
    require(p >= (static_cast<std::uint64_t>(d) * d + 1) * (d - 1), "check_key2: p below the admissible floor");
    const std::uint32_t r = p % d;

    const std::uint64_t weight = static_cast<std::uint64_t>(p) * i - j;
    const std::uint64_t cdeg = (weight + d - 1) / d;
    require(cdeg >= d, "check_key2: degree shift would be negative");
    const std::uint32_t shift = static_cast<std::uint32_t>(cdeg - d);

    // v_i = 1 / ceil((p*i - 1)/d)! mod p
    const std::uint64_t t = (static_cast<std::uint64_t>(p) * i - 1 + d - 1) / d;
    require(t < p, "check_key2: factorial index must be below p");
    std::uint64_t fact = 1;
    for (std::uint64_t u = 2; u <= t; ++u) fact = fact * u % p;
    const std::uint64_t vi = invmod64(fact, p);

    auto lhs = mp_reduce_mod(k_tilde(d, p, i, j), p);
    auto rhs_src = mp_reduce_mod(h_tilde(d, r, i, j), p);
    std::map<std::vector<std::uint32_t>, std::uint64_t, MonomialOrder> rhs;
    for (const auto& [e, c] : rhs_src) {
        std::vector<std::uint32_t> e2 = e;
        e2[d - 1] += shift;
        std::uint64_t v = vi * c % p;
        if (v != 0) rhs.emplace(std::move(e2), v);
    }
    return lhs == rhs;
}

MembershipReport membership_U(const std::vector<mpq_class>& a) {
    const std::uint32_t d = static_cast<std::uint32_t>(a.size());
    require(d >= 3, "membership_U: need at least three coefficients");
    for (std::uint32_t r = 1; r < d; ++r) {
        if (std::gcd(r, d) != 1) continue;
        FactorSet fs = psi_factors(d, r);
        for (const auto& f : fs.factors)
            if (mp_eval(f.poly, a) == 0) return {false, f.label};
    }
    return {true, ""};
}

HeightReport height_bound(const std::vector<mpq_class>& a) {
    MembershipReport m = membership_U(a);
    require(m.in_U, "height_bound: point lies outside the generic locus");
    const std::uint32_t d = static_cast<std::uint32_t>(a.size());

    HeightReport rep;
    rep.floor_ = (static_cast<unsigned long>(d) * d + 1) * (d - 1);
    std::set<mpz_class> bad;
    std::vector<mpz_class> caps;

    // integrality: any prime in a coefficient denominator
    for (const mpq_class& c : a) collect_prime_divisors(c.get_den(), bad, caps);

    // unit values: primes in a factor value, filtered to the matching residue class
    for (std::uint32_t r = 1; r < d; ++r) {
        if (std::gcd(r, d) != 1) continue;
        FactorSet fs = psi_factors(d, r);
        for (const auto& f : fs.factors) {
            mpq_class v = mp_eval(f.poly, a);
            std::set<mpz_class> local;
            collect_prime_divisors(v.get_num(), local, caps);
            collect_prime_divisors(v.get_den(), local, caps);
            for (const mpz_class& q : local)
                if (mpz_fdiv_ui(q.get_mpz_t(), d) == r) bad.insert(q);
        }
    }

    rep.bad_primes.assign(bad.begin(), bad.end());
    rep.bound = rep.floor_;
    for (const mpz_class& q : rep.bad_primes) rep.bound = std::max(rep.bound, q);
    for (const mpz_class& c : caps) rep.bound = std::max(rep.bound, c);
    rep.complete = caps.empty();
    return rep;
}

bool ordinary_certificate(const std::vector<FqElem>& a) {
    const std::uint32_t d = static_cast<std::uint32_t>(a.size());
    require(d >= 3, "ordinary_certificate: need at least three coefficients");
    const Field F = a[0].field;
    for (const FqElem& x : a) require(x.field == F, "ordinary_certificate: mixed fields");
    const std::uint64_t p = F->p;
    require(std::gcd(p, static_cast<std::uint64_t>(d)) == 1, "ordinary_certificate: p must not divide d");
    require(p >= (static_cast<std::uint64_t>(d) * d + 1) * (d - 1), "ordinary_certificate: p below the admissible floor");
    const std::uint32_t r = static_cast<std::uint32_t>(p % d);

    if (a[d - 1].is_zero()) return false;
    for (std::uint32_t i = 1; i <= d - 1; ++i)
        for (std::uint32_t j = 1; j <= d - 1; ++j)
            if (mp_eval_mod(h_tilde(d, r, i, j), a).is_zero()) return false;
    for (std::uint32_t n = 1; n + 1 <= d - 1; ++n)
        if (mp_eval_mod(f_tilde(d, r, n), a).is_zero()) return false;
    return true;
}

}  // namespace asnp
