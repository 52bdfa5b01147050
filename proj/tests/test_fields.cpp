#include "asnp/fields.hpp"

#include <cstdint>
#include <vector>

#include "doctest.h"

using namespace asnp;

namespace {

// independent oracle: least monic irreducible quadratic over F_p by root search,
// coefficients compared low-to-high
std::vector<std::uint32_t> least_irreducible_quadratic(std::uint32_t p) {
    for (std::uint32_t c0 = 0; c0 < p; ++c0)
        for (std::uint32_t c1 = 0; c1 < p; ++c1) {
            bool has_root = false;
            for (std::uint32_t x = 0; x < p && !has_root; ++x)
                if ((x * x + c1 * x + c0) % p == 0) has_root = true;
            if (!has_root) return {c0, c1, 1};
        }
    return {};
}

}  // namespace

TEST_CASE("defining polynomials are the lex-least monic irreducibles") {
    CHECK(build_field(2, 2)->defpoly == std::vector<std::uint32_t>{1, 1, 1});  // x^2+x+1
    CHECK(build_field(3, 2)->defpoly == std::vector<std::uint32_t>{1, 0, 1});  // x^2+1
    CHECK(build_field(7, 1)->defpoly == std::vector<std::uint32_t>{0, 1});     // x
    for (std::uint32_t p : {2u, 3u, 5u, 23u})
        CHECK(build_field(p, 2)->defpoly == least_irreducible_quadratic(p));
}

TEST_CASE("field construction is cached and deterministic") {
    Field a = build_field(5, 3);
    Field b = build_field(5, 3);
    CHECK(a.get() == b.get());
    CHECK(a->q == 125);
}

TEST_CASE("arithmetic closes: inverses, associativity spot checks") {
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 3}, {3, 2}, {5, 2}}) {
        Field f = build_field(p, n);
        FqElem one = fq_one(f);
        for (std::uint64_t i = 1; i < f->q; ++i) {
            FqElem a = element_at(f, i);
            CHECK(a * fq_inv(a) == one);
        }
        FqElem a = element_at(f, 1 % f->q), b = element_at(f, f->q - 1), c = element_at(f, f->q / 2);
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("element_at and index_of are inverse") {
    Field f = build_field(3, 3);
    for (std::uint64_t i = 0; i < f->q; ++i) CHECK(index_of(element_at(f, i)) == i);
}

TEST_CASE("frobenius fixes exactly the prime field") {
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 4}, {3, 3}, {5, 2}}) {
        Field f = build_field(p, n);
        std::uint64_t fixed = 0;
        for (std::uint64_t i = 0; i < f->q; ++i)
            if (frobenius(element_at(f, i)) == element_at(f, i)) ++fixed;
        CHECK(fixed == p);
    }
}

TEST_CASE("trace of the F_4 generator is 1") {
    Field f = build_field(2, 2);
    FqElem w = fq_gen(f);
    CHECK(trace_abs(w) == 1);
    // oracle: Tr(a) = a + a^2 must be the same constant
    FqElem t = w + w * w;
    CHECK(t == fq_one(f));
}

TEST_CASE("trace is F_p-linear, surjective and balanced") {
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 4}, {3, 2}, {5, 2}, {7, 2}}) {
        Field f = build_field(p, n);
        std::vector<std::uint64_t> hist(p, 0);
        for (std::uint64_t i = 0; i < f->q; ++i) ++hist[trace_abs(element_at(f, i))];
        for (std::uint32_t t = 0; t < p; ++t) CHECK(hist[t] == f->q / p);
        // oracle on a few elements: sum of conjugates
        for (std::uint64_t i = 0; i < 5 && i < f->q; ++i) {
            FqElem a = element_at(f, i), s = a;
            for (std::uint32_t j = 1; j < n; ++j) s = s + frobenius(a, j);
            CHECK(s == fq_from_int(f, trace_abs(a)));
        }
    }
}

TEST_CASE("subfield elements form the fixed field of frob^ell") {
    Field f = build_field(2, 4);
    auto sub = subfield_elements(f, 2);
    CHECK(sub.size() == 4);
    CHECK(sub[0].is_zero());
    for (const FqElem& a : sub) {
        CHECK(in_subfield(a, 2));
        for (const FqElem& b : sub) {
            bool found_sum = false, found_prod = false;
            for (const FqElem& c : sub) {
                if (c == a + b) found_sum = true;
                if (c == a * b) found_prod = true;
            }
            CHECK(found_sum);
            CHECK(found_prod);
        }
    }
    // a proper subfield element that is not in F_2
    int outside_prime = 0;
    for (const FqElem& a : sub)
        if (!in_subfield(a, 1)) ++outside_prime;
    CHECK(outside_prime == 2);
}

TEST_CASE("relative trace lands in the subfield and composes to the absolute trace") {
    Field f = build_field(2, 6);
    FpMat rel = rel_trace_matrix(f, 3);
    for (std::uint64_t i = 0; i < 64; ++i) {
        FqElem a = element_at(f, i);
        FqElem t{f, rel.apply(a.c)};
        CHECK(in_subfield(t, 3));
        CHECK(subfield_trace(t, 3) == trace_abs(a));
    }
}

TEST_CASE("dual basis pairs to the identity under the subfield trace") {
    Field f = build_field(3, 2);
    std::vector<FqElem> basis = {fq_one(f), fq_gen(f)};
    auto duals = dual_basis(basis, 2);
    for (std::uint32_t i = 0; i < 2; ++i)
        for (std::uint32_t j = 0; j < 2; ++j)
            CHECK(subfield_trace(basis[i] * duals[j], 2) == (i == j ? 1u : 0u));

    // inside a bigger field: the degree-2 subfield of F_{2^4}
    Field g = build_field(2, 4);
    auto sub = subfield_elements(g, 2);
    FqElem u;
    for (const FqElem& a : sub)
        if (!in_subfield(a, 1)) {
            u = a;
            break;
        }
    std::vector<FqElem> b2 = {fq_one(g), u};
    auto d2 = dual_basis(b2, 2);
    for (std::uint32_t i = 0; i < 2; ++i)
        for (std::uint32_t j = 0; j < 2; ++j)
            CHECK(subfield_trace(b2[i] * d2[j], 2) == (i == j ? 1u : 0u));
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS(build_field(4, 2));
    CHECK_THROWS(build_field(2, 0));
    CHECK_THROWS(build_field(1, 1));
}
