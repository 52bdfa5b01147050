#include "asnp/zeta.hpp"

#include <sstream>
#include <utility>

#include "asnp/check.hpp"
#include "asnp/gnp.hpp"

namespace asnp {

namespace {

mpz_class upow(std::uint64_t base, std::uint32_t e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

void check_enumerable(std::uint64_t q, std::uint32_t m, const char* who) {
    mpz_class total = upow(q, m);
    if (total > mpz_class(static_cast<unsigned long>(kEnumerationCap))) {
        std::ostringstream os;
        os << who << ": refusing to stream " << total.get_str() << " field elements (cap " << kEnumerationCap
           << ")";
        throw std::invalid_argument(os.str());
    }
}

std::uint64_t genus_of(const CurveSpec& cv) {
    mpz_class num = (upow(cv.p, cv.ell) - 1) * (cv.f.degree() - 1);
    ensure(mpz_even_p(num.get_mpz_t()), "genus: (p^ell - 1)(d - 1) must be even");
    mpz_class g = num / 2;
    ensure(g.fits_ulong_p(), "genus: out of range");
    return g.get_ui();
}

}  // namespace

CurveSpec make_curve(std::uint32_t ell, PolyOverFq f) {
    require(ell >= 1, "make_curve: ell must be positive");
    require(f.field != nullptr, "make_curve: empty polynomial");
    require(f.field->n % ell == 0, "make_curve: ell must divide the field degree");
    CurveSpec cv;
    cv.p = f.field->p;
    cv.ell = ell;
    cv.b = f.field->n;
    cv.f = std::move(f);
    return cv;
}

mpz_class count_points(const CurveSpec& cv, std::uint32_t m) {
    require(m >= 1, "count_points: extension degree must be positive");
    check_enumerable(cv.f.field->q, m, "count_points");
    Field E = build_field(cv.p, cv.b * m);
    PolyOverFq fE = embed_poly(cv.f, E);
    FpMat R = rel_trace_matrix(E, cv.ell);
    std::uint64_t n0 = 0;
    for (std::uint64_t idx = 0; idx < E->q; ++idx) {
        FqElem x = element_at(E, idx);
        std::vector<std::uint32_t> t = R.apply(poly_eval(fE, x).c);
        bool zero = true;
        for (std::uint32_t v : t)
            if (v) {
                zero = false;
                break;
            }
        if (zero) ++n0;
    }
    return upow(cv.p, cv.ell) * mpz_class(static_cast<unsigned long>(n0)) + 1;
}

ZetaNumerator zeta_numerator_direct(const CurveSpec& cv) {
    const std::uint64_t q = cv.f.field->q;
    const std::uint64_t g = genus_of(cv);
    require(g >= 1, "zeta_numerator_direct: genus zero");
    const std::uint32_t twog = static_cast<std::uint32_t>(2 * g);
    check_enumerable(q, twog, "zeta_numerator_direct");

    // numerator = Z(s)(1-s)(1-qs), so log-derivative weights are N_m - 1 - q^m
    std::vector<mpz_class> t;
    t.reserve(twog);
    for (std::uint32_t m = 1; m <= twog; ++m) t.push_back(count_points(cv, m) - 1 - upow(q, m));

    std::vector<mpq_class> c;
    c.emplace_back(1);
    for (std::uint32_t m = 1; m <= twog; ++m) {
        mpq_class sum(0);
        for (std::uint32_t k = 1; k <= m; ++k) sum += mpq_class(t[k - 1]) * c[m - k];
        mpq_class cm = sum / static_cast<long>(m);
        cm.canonicalize();
        ensure(cm.get_den() == 1, "zeta_numerator_direct: non-integer numerator coefficient");
        c.push_back(std::move(cm));
    }

    ZetaNumerator z;
    z.p = cv.p;
    z.b = cv.b;
    for (const mpq_class& v : c) z.c.push_back(v.get_num());
    for (std::uint64_t i = 0; i <= g; ++i)
        ensure(z.c[twog - i] == upow(q, static_cast<std::uint32_t>(g - i)) * z.c[i],
               "zeta_numerator_direct: functional-equation symmetry failed");
    return z;
}

SlopeMultiset slopes_of_numerator(const ZetaNumerator& z) {
    std::vector<std::pair<long, ExtRational>> pts;
    mpz_class pz(static_cast<unsigned long>(z.p));
    for (std::size_t i = 0; i < z.c.size(); ++i) {
        if (z.c[i] == 0) {
            pts.emplace_back(static_cast<long>(i), ExtRational::infinity());
            continue;
        }
        mpz_class rest;
        unsigned long v = mpz_remove(rest.get_mpz_t(), z.c[i].get_mpz_t(), pz.get_mpz_t());
        mpq_class val(static_cast<unsigned long>(v), static_cast<unsigned long>(z.b));
        val.canonicalize();
        pts.emplace_back(static_cast<long>(i), ExtRational(val));
    }
    return slopes(hull_from_values(pts));
}

SlopeMultiset zeta_slopes_product(const CurveSpec& cv, const LPolyOptions& opt) {
    std::vector<AlphaScanEntry> entries = alpha_scan(cv.f, cv.ell, opt);
    std::vector<SlopeMultiset> parts;
    parts.reserve(entries.size());
    for (const AlphaScanEntry& e : entries) parts.push_back(slopes(e.np));
    return union_slopes(parts);
}

OrdinaryReport is_ordinary(const CurveSpec& cv, const LPolyOptions& opt) {
    OrdinaryReport r;
    r.np = zeta_slopes_product(cv, opt);
    GnpResult gp = gnp_full(cv.f.degree(), cv.p);
    mpz_class copies = upow(cv.p, cv.ell) - 1;
    std::vector<std::pair<mpq_class, mpq_class>> scaled;
    SlopeMultiset base = slopes(gp.polygon);
    for (const auto& sm : base.items()) scaled.emplace_back(sm.first, sm.second * mpq_class(copies));
    r.gnp_ref = SlopeMultiset::from_pairs(std::move(scaled));
    r.achieves = r.np == r.gnp_ref;
    r.note =
        "reference polygon is the asymptotic generic polygon of the full degree-d family; "
        "for small p the family infimum itself is not certified here";
    return r;
}

}  // namespace asnp
