#include <doctest.h>

#include <cstdint>
#include <vector>

#include "asnp/cyclo.hpp"
#include "asnp/fields.hpp"
#include "asnp/gnp.hpp"
#include "asnp/lfun.hpp"

using namespace asnp;

namespace {

// independent histogram: plain per-element field arithmetic, no stepping tables
std::vector<std::uint64_t> naive_hist(const PolyOverFq& f, std::uint32_t k, const FqElem& alpha) {
    Field E = build_field(f.field->p, f.field->n * k);
    PolyOverFq fE = embed_poly(f, E);
    Embedding em = make_embedding(f.field, E);
    FqElem aE = embed(em, alpha);
    std::vector<std::uint64_t> h(f.field->p, 0);
    for (std::uint64_t i = 0; i < E->q; ++i) ++h[trace_abs(aE * poly_eval(fE, element_at(E, i)))];
    return h;
}

PolyOverFq ints_poly(const Field& f, std::initializer_list<long> a) {
    std::vector<mpq_class> v;
    for (long x : a) v.emplace_back(x);
    return poly_from_rationals(f, v);
}

}  // namespace

TEST_CASE("embedding is a deterministic field homomorphism") {
    Field f9 = build_field(3, 2);
    Field f81 = build_field(3, 4);
    Embedding em = make_embedding(f9, f81);

    // injective on all of F_9, multiplicative and additive
    std::vector<FqElem> images;
    for (std::uint64_t i = 0; i < 9; ++i) {
        FqElem a = element_at(f9, i);
        FqElem ia = embed(em, a);
        for (const FqElem& prev : images) CHECK(prev != ia);
        images.push_back(ia);
        for (std::uint64_t j = 0; j < 9; ++j) {
            FqElem b = element_at(f9, j);
            CHECK(embed(em, a + b) == embed(em, a) + embed(em, b));
            CHECK(embed(em, a * b) == embed(em, a) * embed(em, b));
        }
    }
    CHECK(embed(em, fq_one(f9)) == fq_one(f81));

    // absolute trace picks up the relative extension degree
    for (std::uint64_t i = 0; i < 9; ++i) {
        FqElem a = element_at(f9, i);
        CHECK(trace_abs(embed(em, a)) == 2 * trace_abs(a) % 3);
    }

    // identity embedding when the fields coincide
    Embedding id = make_embedding(f9, f9);
    FqElem g = fq_gen(f9);
    CHECK(embed(id, g) == g);
}

TEST_CASE("power-map sum vanishes when the cube map is a bijection") {
    // x -> x^3 permutes F_5 and F_2, so the sum telescopes to a full character sum
    Field f5 = build_field(5, 1);
    CHECK(exp_sum(ints_poly(f5, {0, 0, 1}), 1, fq_one(f5)).is_zero());
    Field f2 = build_field(2, 1);
    CHECK(exp_sum(ints_poly(f2, {0, 0, 1}), 1, fq_one(f2)).is_zero());
}

TEST_CASE("histogram totals the field size") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    for (std::uint32_t k = 1; k <= 2; ++k) {
        auto h = exp_sum_histogram(f, k, fq_one(f7));
        std::uint64_t total = 0;
        for (std::uint64_t v : h) total += v;
        std::uint64_t qk = 1;
        for (std::uint32_t i = 0; i < k; ++i) qk *= 7;
        CHECK(total == qk);
    }
    Field f4 = build_field(2, 2);
    PolyOverFq g = ints_poly(f4, {0, 1, 1});
    for (std::uint32_t k = 1; k <= 3; ++k) {
        auto h = exp_sum_histogram(g, k, fq_gen(f4));
        CHECK(h[0] + h[1] == (1ull << (2 * k)));
    }
}

TEST_CASE("scan kernels agree with plain enumeration") {
    Field f4 = build_field(2, 2);
    PolyOverFq g = ints_poly(f4, {0, 1, 1});
    for (std::uint32_t k = 1; k <= 3; ++k) {
        CHECK(exp_sum_histogram(g, k, fq_one(f4)) == naive_hist(g, k, fq_one(f4)));
        CHECK(exp_sum_histogram(g, k, fq_gen(f4)) == naive_hist(g, k, fq_gen(f4)));
    }

    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    FqElem a3 = fq_from_int(f7, 3);
    for (std::uint32_t k = 1; k <= 2; ++k) CHECK(exp_sum_histogram(f, k, a3) == naive_hist(f, k, a3));

    Field f3 = build_field(3, 1);
    PolyOverFq h = ints_poly(f3, {1, 0, 0, 1});
    FqElem a2 = fq_from_int(f3, 2);
    for (std::uint32_t k = 1; k <= 2; ++k) CHECK(exp_sum_histogram(h, k, a2) == naive_hist(h, k, a2));
}

TEST_CASE("seven-term symbolic sum") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    CycNum expected(7);
    for (long x = 0; x < 7; ++x) expected = cyc_add(expected, cyc_zeta_pow(7, (x * x * x + x) % 7));
    CHECK(exp_sum(f, 1, fq_one(f7)) == expected);
}

TEST_CASE("recurrence base cases and endpoint valuation") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    FqElem one = fq_one(f7);
    CycNum s1 = exp_sum(f, 1, one);
    CycNum s2 = exp_sum(f, 2, one);
    LPolynomial L = l_poly(f, one);
    REQUIRE(L.degree() == 2);
    CHECK(L.coeffs[1] == s1);
    CHECK(L.coeffs[2] == cyc_scal(cyc_add(s2, cyc_mul(s1, s1)), mpq_class(1, 2)));
    CHECK(valuation(L.coeffs[2]) == ExtRational(1, 1));

    NewtonPolygon np = np_of_l(L);
    CHECK(np == hodge(3));  // 7 = 1 mod 3: the generic polygon meets the lower bound
}

TEST_CASE("vanishing checks extend the recurrence when affordable") {
    Field f5 = build_field(5, 1);
    PolyOverFq f = ints_poly(f5, {1, 0, 1});
    LPolynomial L = l_poly(f, fq_one(f5));
    CHECK(L.degree_checks_run == std::vector<std::uint32_t>{3, 4, 5});

    LPolyOptions tight;
    tight.degree_check_budget = 0;
    LPolynomial L2 = l_poly(f, fq_one(f5), tight);
    CHECK(L2.degree_checks_run.empty());
    CHECK(L2.coeffs.size() == L.coeffs.size());
    for (std::size_t i = 0; i < L.coeffs.size(); ++i) CHECK(L.coeffs[i] == L2.coeffs[i]);
}

TEST_CASE("scaling alpha acts through the cyclotomic symmetry") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    for (std::uint32_t k = 1; k <= 2; ++k)
        CHECK(exp_sum(f, k, fq_from_int(f7, 3)) == cyc_galois(exp_sum(f, k, fq_one(f7)), 3));
    CHECK(np_of_l(l_poly(f, fq_from_int(f7, 3))) == np_of_l(l_poly(f, fq_one(f7))));
}

TEST_CASE("constant shift twists coefficients by a unit") {
    Field f5 = build_field(5, 1);
    PolyOverFq f = ints_poly(f5, {1, 0, 1});
    FqElem alpha = fq_from_int(f5, 2);
    LPolynomial L = l_poly(f, alpha);

    // with f + 1 the sums pick up zeta^(Tr(alpha)) per extension, so each c_n
    // is twisted by a root of unity and the polygon cannot move
    std::vector<CycNum> s_shift;
    for (std::uint32_t k = 1; k <= 2; ++k) {
        std::uint64_t tk = 2ull * k % 5;  // absolute trace of alpha in F_{5^k}
        s_shift.push_back(cyc_mul(cyc_zeta_pow(5, tk), exp_sum(f, k, alpha)));
    }
    std::vector<CycNum> c{cyc_from_rat(5, 1)};
    c.push_back(s_shift[0]);
    c.push_back(cyc_scal(cyc_add(s_shift[1], cyc_mul(s_shift[0], s_shift[0])), mpq_class(1, 2)));
    LPolynomial shifted;
    shifted.p = 5;
    shifted.b = 1;
    shifted.coeffs = c;
    CHECK(np_of_l(shifted) == np_of_l(L));
    for (std::uint32_t n = 1; n <= 2; ++n) CHECK(valuation(shifted.coeffs[n]) == valuation(L.coeffs[n]));
}

TEST_CASE("rank reduction recovers the plain rank-one case") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    RankEllResult r = l_poly_rank_ell(f, 1, {1}, {fq_one(f7)});
    CHECK(r.alpha == fq_one(f7));
    LPolynomial direct = l_poly(f, fq_one(f7));
    REQUIRE(r.L.coeffs.size() == direct.coeffs.size());
    for (std::size_t i = 0; i < direct.coeffs.size(); ++i) CHECK(r.L.coeffs[i] == direct.coeffs[i]);
}

TEST_CASE("rank-two reduction picks out the expected alpha") {
    Field f4 = build_field(2, 2);
    PolyOverFq f = ints_poly(f4, {1, 0, 1});
    FqElem om = fq_gen(f4);
    RankEllResult r = l_poly_rank_ell(f, 2, {0, 1}, {fq_one(f4), om});
    CHECK(r.alpha == om);

    CHECK_THROWS_AS(l_poly_rank_ell(f, 2, {0, 0}, {fq_one(f4), om}, {}), std::invalid_argument);
}

TEST_CASE("dual-form sums match the alpha reduction") {
    Field f4 = build_field(2, 2);
    PolyOverFq f = ints_poly(f4, {1, 0, 1});
    FqElem om = fq_gen(f4);
    for (std::uint32_t k = 1; k <= 2; ++k)
        CHECK(exp_sum_dual_form(f, k, 2, {0, 1}, {fq_one(f4), om}) == exp_sum(f, k, om));

    Field f9 = build_field(3, 2);
    PolyOverFq g = ints_poly(f9, {1, 0, 0, 1});
    FqElem x = fq_gen(f9);
    FqElem alpha = fq_one(f9) + fq_from_int(f9, 2) * x;
    for (std::uint32_t k = 1; k <= 2; ++k)
        CHECK(exp_sum_dual_form(g, k, 2, {1, 2}, {fq_one(f9), x}) == exp_sum(g, k, alpha));
}

TEST_CASE("chunked accumulation is independent of the worker count") {
    Field f4 = build_field(2, 2);
    PolyOverFq g = ints_poly(f4, {0, 1, 1});
    // ten quadratic extensions: 2^20 elements, several chunks
    auto h1 = exp_sum_histogram(g, 10, fq_gen(f4), 1);
    auto h3 = exp_sum_histogram(g, 10, fq_gen(f4), 3);
    CHECK(h1 == h3);

    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    CHECK(exp_sum_histogram(f, 2, fq_one(f7), 1) == exp_sum_histogram(f, 2, fq_one(f7), 4));
}

TEST_CASE("alpha scan covers the subfield units") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    auto entries = alpha_scan(f, 1);
    REQUIRE(entries.size() == 6);
    for (const auto& e : entries) {
        CHECK(!e.alpha.is_zero());
        CHECK(e.np == hodge(3));
    }
}

TEST_CASE("structure report on a computed polynomial") {
    Field f7 = build_field(7, 1);
    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    LStructure s = l_structure_report(l_poly(f, fq_one(f7)));
    CHECK(s.degree == 2);
    CHECK(s.endpoint_ok);
    CHECK(s.slopes_in_unit_interval);
    CHECK(s.above_hodge);
    CHECK(s.above_generic);
    CHECK(s.all_ok());
}

TEST_CASE("normalization divides by the field degree") {
    Field f4 = build_field(2, 2);
    PolyOverFq f = ints_poly(f4, {1, 0, 1});
    LPolynomial L = l_poly(f, fq_one(f4));
    NewtonPolygon np = np_of_l(L);
    CHECK(np.back().x == 2);
    CHECK(np.back().y == 1);
}

TEST_CASE("input validation") {
    Field f7 = build_field(7, 1);
    Field f3 = build_field(3, 1);

    CHECK_THROWS_AS(ints_poly(f7, {1, 1}), std::invalid_argument);             // degree below three
    CHECK_THROWS_AS(ints_poly(f7, {1, 0, 0}), std::invalid_argument);          // zero leading coefficient
    CHECK_THROWS_AS(ints_poly(f3, {0, 0, 1}), std::invalid_argument);          // degree divisible by p
    CHECK_THROWS_AS(poly_from_rationals(f7, {mpq_class(1, 7), mpq_class(0), mpq_class(1)}),
                    std::invalid_argument);                                    // denominator divisible by p

    PolyOverFq f = ints_poly(f7, {1, 0, 1});
    CHECK_THROWS_AS(exp_sum(f, 1, fq_zero(f7)), std::invalid_argument);
    CHECK_THROWS_AS(exp_sum(f, 1, fq_one(f3)), std::invalid_argument);
    CHECK_THROWS_AS(alpha_scan(f, 2), std::invalid_argument);  // 2 does not divide b = 1
}
