#include "asnp/lfun.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "asnp/check.hpp"
#include "asnp/gnp.hpp"
#include "asnp/intutil.hpp"
#include "asnp/parallel.hpp"

namespace asnp {

namespace {

mpz_class upow(std::uint64_t base, std::uint32_t e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

void check_enumerable(std::uint64_t q, std::uint32_t k, const char* who) {
    mpz_class total = upow(q, k);
    if (total > mpz_class(static_cast<unsigned long>(kEnumerationCap))) {
        std::ostringstream os;
        os << who << ": refusing to stream " << total.get_str() << " field elements (cap " << kEnumerationCap
           << ")";
        throw std::invalid_argument(os.str());
    }
}

std::uint64_t pack_bits(const std::vector<std::uint32_t>& v) {
    std::uint64_t b = 0;
    for (std::size_t i = 0; i < v.size(); ++i) b |= static_cast<std::uint64_t>(v[i] & 1u) << i;
    return b;
}

FqElem basis_elem(const Field& f, std::uint32_t j) {
    std::vector<std::uint32_t> c(f->n, 0);
    c[j] = 1;
    return FqElem{f, std::move(c)};
}

FqElem find_generator(const Field& E) {
    std::uint64_t m = E->q - 1;
    auto fac = factor64(m);
    for (std::uint64_t idx = 1; idx < E->q; ++idx) {
        FqElem g = element_at(E, idx);
        bool ok = true;
        for (const auto& pe : fac)
            if (fq_pow(g, m / pe.first) == fq_one(E)) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    ensure(false, "find_generator: exhausted the field");
    return fq_zero(E);
}

// generic digit tables stay small only for moderate characteristic
constexpr std::uint32_t kDigitTableMaxP = 1u << 16;

// Everything about S(k) for one extension degree that does not depend on
// alpha: the extension field, the embedded nonzero coefficients, a generator
// of E^*, and stepping tables for y_t = x^(i_t) as x runs through generator
// powers (so each y_t advances by the fixed multiplier gen^(i_t)).
struct SumContext {
    Field E;
    std::uint32_t k = 0;
    std::uint64_t group = 0;
    FqElem gen;
    Embedding emb;
    std::vector<std::uint32_t> exps;
    std::vector<FqElem> coeffs;
    std::vector<FqElem> steps;  // gen^(i_t)
    bool packed = false;        // characteristic-2 bit kernel
    std::uint32_t nbytes = 0;
    std::vector<std::vector<std::uint64_t>> bit_step;    // per exponent, [byte*256 + value]
    std::vector<std::vector<std::uint32_t>> digit_step;  // per exponent, [(j*p + c)*n + i]
};

SumContext make_context(const PolyOverFq& f, std::uint32_t k) {
    const Field& base = f.field;
    check_enumerable(base->q, k, "exp_sum");
    SumContext cx;
    cx.k = k;
    cx.E = build_field(base->p, base->n * k);
    cx.group = cx.E->q - 1;
    cx.emb = make_embedding(base, cx.E);
    for (std::uint32_t i = 1; i <= f.degree(); ++i) {
        if (f.coeffs[i - 1].is_zero()) continue;
        cx.exps.push_back(i);
        cx.coeffs.push_back(embed(cx.emb, f.coeffs[i - 1]));
    }
    cx.gen = find_generator(cx.E);
    for (std::uint32_t e : cx.exps) cx.steps.push_back(fq_pow(cx.gen, e));

    const std::uint32_t n = cx.E->n;
    const std::uint32_t p = cx.E->p;
    if (p == 2 && n <= 63) {
        cx.packed = true;
        cx.nbytes = (n + 7) / 8;
        for (std::size_t t = 0; t < cx.exps.size(); ++t) {
            std::vector<std::uint64_t> img(8 * cx.nbytes, 0);
            for (std::uint32_t j = 0; j < n; ++j) img[j] = pack_bits((cx.steps[t] * basis_elem(cx.E, j)).c);
            std::vector<std::uint64_t> tab(std::size_t(cx.nbytes) * 256, 0);
            for (std::uint32_t B = 0; B < cx.nbytes; ++B)
                for (std::uint32_t v = 1; v < 256; ++v) {
                    std::uint32_t low = v & (v - 1);
                    std::uint32_t bit = static_cast<std::uint32_t>(__builtin_ctz(v));
                    tab[B * 256 + v] = tab[B * 256 + low] ^ img[8 * B + bit];
                }
            cx.bit_step.push_back(std::move(tab));
        }
    } else if (p <= kDigitTableMaxP) {
        for (std::size_t t = 0; t < cx.exps.size(); ++t) {
            std::vector<std::uint32_t> tab(std::size_t(n) * p * n);
            for (std::uint32_t j = 0; j < n; ++j) {
                FqElem zj = cx.steps[t] * basis_elem(cx.E, j);
                for (std::uint32_t c = 0; c < p; ++c) {
                    std::uint32_t* row = &tab[(std::size_t(j) * p + c) * n];
                    for (std::uint32_t i = 0; i < n; ++i)
                        row[i] = static_cast<std::uint32_t>(std::uint64_t(c) * zj.c[i] % p);
                }
            }
            cx.digit_step.push_back(std::move(tab));
        }
    }
    return cx;
}

// alpha-dependent part: t(x) = Tr(alpha f(x)) = sum_t Tr(m_t x^(i_t)) with
// m_t = alpha a_(i_t); the per-basis-coordinate traces of each m_t collapse
// the trace to a dot product (odd p) or a parity mask (p = 2)
struct AlphaData {
    std::vector<FqElem> m;
    std::vector<std::uint64_t> masks;
    std::vector<std::vector<std::uint32_t>> trace_rows;
};

AlphaData make_alpha_data(const SumContext& cx, const FqElem& alpha_base) {
    AlphaData ad;
    FqElem aE = embed(cx.emb, alpha_base);
    const std::uint32_t n = cx.E->n;
    for (std::size_t t = 0; t < cx.exps.size(); ++t) {
        FqElem mt = aE * cx.coeffs[t];
        if (cx.packed) {
            std::uint64_t mask = 0;
            for (std::uint32_t j = 0; j < n; ++j)
                if (trace_abs(mt * basis_elem(cx.E, j)) & 1u) mask |= std::uint64_t(1) << j;
            ad.masks.push_back(mask);
        } else {
            std::vector<std::uint32_t> row(n);
            for (std::uint32_t j = 0; j < n; ++j) row[j] = trace_abs(mt * basis_elem(cx.E, j));
            ad.trace_rows.push_back(std::move(row));
        }
        ad.m.push_back(std::move(mt));
    }
    return ad;
}

std::vector<std::uint64_t> histogram_ctx(const SumContext& cx, const FqElem& alpha_base, unsigned threads) {
    const std::uint32_t p = cx.E->p;
    const std::size_t ne = cx.exps.size();
    AlphaData ad = make_alpha_data(cx, alpha_base);
    std::vector<std::uint64_t> zero(p, 0);
    std::vector<std::vector<std::uint64_t>> parts;

    if (cx.packed) {
        parts = chunked_reduce(
            cx.group, zero,
            [&](std::vector<std::uint64_t>& h, std::uint64_t begin, std::uint64_t end) {
                FqElem x0 = fq_pow(cx.gen, begin);
                std::vector<std::uint64_t> ys(ne);
                for (std::size_t t = 0; t < ne; ++t) ys[t] = pack_bits(fq_pow(x0, cx.exps[t]).c);
                const std::uint32_t nb = cx.nbytes;
                for (std::uint64_t s = begin; s < end; ++s) {
                    unsigned bit = 0;
                    for (std::size_t t = 0; t < ne; ++t)
                        bit ^= static_cast<unsigned>(__builtin_parityll(ys[t] & ad.masks[t]));
                    ++h[bit];
                    for (std::size_t t = 0; t < ne; ++t) {
                        const std::uint64_t* tab = cx.bit_step[t].data();
                        std::uint64_t y = ys[t], r = 0;
                        for (std::uint32_t B = 0; B < nb; ++B) r ^= tab[B * 256 + ((y >> (8 * B)) & 255u)];
                        ys[t] = r;
                    }
                }
            },
            threads);
    } else if (!cx.digit_step.empty()) {
        const std::uint32_t n = cx.E->n;
        parts = chunked_reduce(
            cx.group, zero,
            [&](std::vector<std::uint64_t>& h, std::uint64_t begin, std::uint64_t end) {
                FqElem x0 = fq_pow(cx.gen, begin);
                std::vector<std::vector<std::uint32_t>> ys(ne);
                for (std::size_t t = 0; t < ne; ++t) ys[t] = fq_pow(x0, cx.exps[t]).c;
                std::vector<std::uint64_t> tmp(n);
                for (std::uint64_t s = begin; s < end; ++s) {
                    std::uint64_t acc = 0;
                    for (std::size_t t = 0; t < ne; ++t) {
                        const std::uint32_t* row = ad.trace_rows[t].data();
                        const std::uint32_t* y = ys[t].data();
                        for (std::uint32_t j = 0; j < n; ++j) acc += std::uint64_t(row[j]) * y[j];
                    }
                    ++h[acc % p];
                    for (std::size_t t = 0; t < ne; ++t) {
                        const std::uint32_t* tab = cx.digit_step[t].data();
                        std::uint32_t* y = ys[t].data();
                        std::fill(tmp.begin(), tmp.end(), 0);
                        for (std::uint32_t j = 0; j < n; ++j) {
                            const std::uint32_t* row = &tab[(std::size_t(j) * p + y[j]) * n];
                            for (std::uint32_t i = 0; i < n; ++i) tmp[i] += row[i];
                        }
                        for (std::uint32_t i = 0; i < n; ++i) y[i] = static_cast<std::uint32_t>(tmp[i] % p);
                    }
                }
            },
            threads);
    } else {
        // plain field arithmetic; only reached for very large characteristic
        parts = chunked_reduce(
            cx.group, zero,
            [&](std::vector<std::uint64_t>& h, std::uint64_t begin, std::uint64_t end) {
                FqElem x0 = fq_pow(cx.gen, begin);
                std::vector<FqElem> ys;
                for (std::size_t t = 0; t < ne; ++t) ys.push_back(fq_pow(x0, cx.exps[t]));
                for (std::uint64_t s = begin; s < end; ++s) {
                    std::uint64_t acc = 0;
                    for (std::size_t t = 0; t < ne; ++t) acc += trace_abs(ad.m[t] * ys[t]);
                    ++h[acc % p];
                    for (std::size_t t = 0; t < ne; ++t) ys[t] = ys[t] * cx.steps[t];
                }
            },
            threads);
    }

    std::vector<std::uint64_t> hist(p, 0);
    for (const auto& part : parts)
        for (std::uint32_t i = 0; i < p; ++i) hist[i] += part[i];
    hist[0] += 1;  // x = 0 contributes trace 0
    return hist;
}

CycNum sum_from_hist(std::uint32_t p, const std::vector<std::uint64_t>& h) {
    std::vector<long long> counts(h.begin(), h.end());
    return zeta_power_combination(p, counts);
}

// contexts for k = 1..d-1 plus as many vanishing-check degrees as fit the budget
struct LEngine {
    const PolyOverFq& f;
    LPolyOptions opt;
    std::uint32_t d;
    std::vector<SumContext> ctx;

    LEngine(const PolyOverFq& f_, const LPolyOptions& o) : f(f_), opt(o), d(f_.degree()) {
        std::uint32_t top = d - 1;
        for (std::uint32_t n = d; n <= d + 2; ++n) {
            mpz_class total = upow(f.field->q, n);
            if (total > mpz_class(static_cast<unsigned long>(opt.degree_check_budget))) break;
            if (total > mpz_class(static_cast<unsigned long>(kEnumerationCap))) break;
            top = n;
        }
        for (std::uint32_t k = 1; k <= top; ++k) ctx.push_back(make_context(f, k));
    }

    LPolynomial run(const FqElem& alpha) const {
        require(alpha.field == f.field, "l_poly: alpha must lie in the coefficient field");
        require(!alpha.is_zero(), "l_poly: alpha must be nonzero");
        const std::uint32_t p = f.field->p;
        std::vector<CycNum> S;
        for (const SumContext& c : ctx) S.push_back(sum_from_hist(p, histogram_ctx(c, alpha, opt.threads)));

        std::vector<CycNum> c;
        c.push_back(cyc_from_rat(p, 1));
        LPolynomial L;
        L.p = p;
        L.b = f.field->n;
        for (std::uint32_t n = 1; n < static_cast<std::uint32_t>(ctx.size()) + 1; ++n) {
            CycNum sum(p);
            for (std::uint32_t k = 1; k <= n; ++k) sum = cyc_add(sum, cyc_mul(S[k - 1], c[n - k]));
            CycNum cn = cyc_scal(sum, mpq_class(1, static_cast<long>(n)));
            if (n <= d - 1) {
                ensure(cyc_is_integral(cn), "l_poly: coefficient is not an algebraic integer");
            } else {
                ensure(cn.is_zero(), "l_poly: coefficient beyond the expected degree is nonzero");
                L.degree_checks_run.push_back(n);
            }
            c.push_back(std::move(cn));
        }
        c.resize(d);
        L.coeffs = std::move(c);
        return L;
    }
};

}  // namespace

PolyOverFq make_poly(const Field& field, std::vector<FqElem> coeffs) {
    require(field != nullptr, "make_poly: null field");
    require(coeffs.size() >= 3, "make_poly: degree must be at least 3");
    for (const FqElem& c : coeffs) require(c.field == field, "make_poly: coefficient in the wrong field");
    require(!coeffs.back().is_zero(), "make_poly: leading coefficient must be nonzero");
    require(coeffs.size() % field->p != 0, "make_poly: degree must be prime to the characteristic");
    PolyOverFq f;
    f.field = field;
    f.coeffs = std::move(coeffs);
    return f;
}

PolyOverFq poly_from_rationals(const Field& field, const std::vector<mpq_class>& a) {
    std::vector<FqElem> cs;
    cs.reserve(a.size());
    for (const mpq_class& v : a) {
        mpz_class num = v.get_num(), den = v.get_den();
        std::uint64_t nr = mpz_fdiv_ui(num.get_mpz_t(), field->p);
        std::uint64_t dr = mpz_fdiv_ui(den.get_mpz_t(), field->p);
        require(dr != 0, "poly_from_rationals: denominator divisible by the characteristic");
        std::uint64_t r = nr * invmod64(dr, field->p) % field->p;
        cs.push_back(fq_from_int(field, static_cast<long>(r)));
    }
    return make_poly(field, std::move(cs));
}

PolyOverFq embed_poly(const PolyOverFq& f, const Field& to) {
    Embedding em = make_embedding(f.field, to);
    std::vector<FqElem> cs;
    cs.reserve(f.coeffs.size());
    for (const FqElem& c : f.coeffs) cs.push_back(embed(em, c));
    return make_poly(to, std::move(cs));
}

FqElem poly_eval(const PolyOverFq& f, const FqElem& x) {
    require(x.field == f.field, "poly_eval: argument in the wrong field");
    FqElem r = f.coeffs.back();
    for (std::size_t i = f.coeffs.size() - 1; i > 0; --i) r = r * x + f.coeffs[i - 1];
    return r * x;
}

std::vector<std::uint64_t> exp_sum_histogram(const PolyOverFq& f, std::uint32_t k, const FqElem& alpha,
                                             unsigned threads) {
    require(k >= 1, "exp_sum: extension degree must be positive");
    require(alpha.field == f.field, "exp_sum: alpha must lie in the coefficient field");
    require(!alpha.is_zero(), "exp_sum: alpha must be nonzero");
    SumContext cx = make_context(f, k);
    return histogram_ctx(cx, alpha, threads);
}

CycNum exp_sum(const PolyOverFq& f, std::uint32_t k, const FqElem& alpha, unsigned threads) {
    return sum_from_hist(f.field->p, exp_sum_histogram(f, k, alpha, threads));
}

CycNum exp_sum_dual_form(const PolyOverFq& f, std::uint32_t k, std::uint32_t ell,
                         const std::vector<std::uint32_t>& n_exps, const std::vector<FqElem>& basis) {
    const Field& base = f.field;
    const std::uint32_t p = base->p;
    require(k >= 1 && ell >= 1, "dual form: k and ell must be positive");
    require(base->n % ell == 0, "dual form: the degree-ell subfield must sit inside the coefficient field");
    require(n_exps.size() == ell && basis.size() == ell, "dual form: need ell exponents and basis elements");
    bool nontrivial = false;
    for (std::uint32_t e : n_exps)
        if (e % p) nontrivial = true;
    require(nontrivial, "dual form: trivial character");
    check_enumerable(base->q, k, "exp_sum_dual_form");

    Field E = build_field(p, base->n * k);
    PolyOverFq fE = embed_poly(f, E);
    Embedding em = make_embedding(base, E);
    std::vector<FqElem> cE;
    for (const FqElem& bel : basis) {
        require(bel.field == base && in_subfield(bel, ell), "dual form: basis element outside F_{p^ell}");
        cE.push_back(embed(em, bel));
        ensure(in_subfield(cE.back(), ell), "dual form: embedding left the subfield");
    }
    FpMat R = rel_trace_matrix(E, ell);
    std::vector<long long> counts(p, 0);
    for (std::uint64_t idx = 0; idx < E->q; ++idx) {
        FqElem x = element_at(E, idx);
        FqElem z{E, R.apply(poly_eval(fE, x).c)};
        std::uint64_t e = 0;
        for (std::uint32_t i = 0; i < ell; ++i) e += std::uint64_t(n_exps[i] % p) * subfield_trace(cE[i] * z, ell);
        ++counts[e % p];
    }
    return zeta_power_combination(p, counts);
}

LPolynomial l_poly(const PolyOverFq& f, const FqElem& alpha, const LPolyOptions& opt) {
    LEngine eng(f, opt);
    return eng.run(alpha);
}

RankEllResult l_poly_rank_ell(const PolyOverFq& f, std::uint32_t ell, const std::vector<std::uint32_t>& n_exps,
                              const std::vector<FqElem>& basis, const LPolyOptions& opt) {
    const std::uint32_t p = f.field->p;
    require(ell >= 1 && f.field->n % ell == 0, "rank reduction: ell must divide the field degree");
    require(n_exps.size() == ell && basis.size() == ell, "rank reduction: need ell exponents and basis elements");
    bool nontrivial = false;
    for (std::uint32_t e : n_exps)
        if (e % p) nontrivial = true;
    require(nontrivial, "rank reduction: trivial character");

    std::vector<FqElem> duals = dual_basis(basis, ell);
    FqElem alpha = fq_zero(f.field);
    for (std::uint32_t i = 0; i < ell; ++i) {
        std::uint32_t ni = n_exps[i] % p;
        if (ni) alpha = alpha + fq_from_int(f.field, static_cast<long>(ni)) * basis[i];
    }
    ensure(!alpha.is_zero(), "rank reduction: alpha vanished for a nontrivial character");
    for (std::uint32_t j = 0; j < ell; ++j)
        ensure(subfield_trace(alpha * duals[j], ell) == n_exps[j] % p,
               "rank reduction: character values on the dual basis do not match");
    return {l_poly(f, alpha, opt), alpha};
}

NewtonPolygon np_of_l(const LPolynomial& L) {
    require(L.b >= 1 && !L.coeffs.empty(), "np_of_l: empty polynomial");
    std::vector<std::pair<long, ExtRational>> pts;
    for (std::size_t i = 0; i < L.coeffs.size(); ++i) {
        ExtRational v = valuation(L.coeffs[i]);
        if (!v.is_infinite()) v = ExtRational(mpq_class(v.value() / static_cast<long>(L.b)));
        pts.emplace_back(static_cast<long>(i), v);
    }
    NewtonPolygon np = hull_from_values(pts);
    const long dm1 = static_cast<long>(L.degree());
    ensure(np.width() == dm1, "np_of_l: hull width differs from the polynomial degree");
    mpq_class half(dm1, 2);
    half.canonicalize();
    ensure(np.back().x == dm1 && np.back().y == half, "np_of_l: endpoint is not (d-1, (d-1)/2)");
    return np;
}

std::vector<AlphaScanEntry> alpha_scan(const PolyOverFq& f, std::uint32_t ell, const LPolyOptions& opt) {
    require(ell >= 1 && f.field->n % ell == 0, "alpha_scan: ell must divide the field degree");
    LEngine eng(f, opt);
    std::vector<AlphaScanEntry> out;
    for (const FqElem& a : subfield_elements(f.field, ell)) {
        if (a.is_zero()) continue;
        AlphaScanEntry e;
        e.alpha = a;
        e.L = eng.run(a);
        e.np = np_of_l(e.L);
        out.push_back(std::move(e));
    }
    return out;
}

LStructure l_structure_report(const LPolynomial& L) {
    LStructure r;
    r.degree = L.degree();
    r.degree_checks_run = L.degree_checks_run;
    const std::uint32_t d = r.degree + 1;
    NewtonPolygon np = np_of_l(L);
    mpq_class half(static_cast<long>(r.degree), 2);
    half.canonicalize();
    r.endpoint_ok = np.back().x == static_cast<long>(r.degree) && np.back().y == half;
    r.slopes_in_unit_interval = true;
    SlopeMultiset sl = slopes(np);
    for (const auto& sm : sl.items())
        if (!(sm.first > 0 && sm.first < 1)) r.slopes_in_unit_interval = false;
    r.above_hodge = lies_above(np, hodge(d));
    r.above_generic = lies_above(np, gnp_full(d, L.p).polygon);
    return r;
}

}  // namespace asnp
