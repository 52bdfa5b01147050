#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asnp/lfun.hpp"
#include "asnp/polygon.hpp"

namespace asnp {

// y^(p^ell) - y = f(x) over F_q, q = p^b, with the degree-ell subfield inside F_q
struct CurveSpec {
    std::uint32_t p = 0;
    std::uint32_t ell = 0;
    std::uint32_t b = 0;
    PolyOverFq f;
};

CurveSpec make_curve(std::uint32_t ell, PolyOverFq f);

// #X(F_{q^m}): each affine fiber has p^ell points when the relative trace of
// f(x) to F_{p^ell} vanishes and none otherwise, plus one point at infinity
mpz_class count_points(const CurveSpec&, std::uint32_t m);

// numerator 1 + c_1 s + ... + c_{2g} s^(2g) of the zeta function,
// g = (p^ell - 1)(d - 1)/2
struct ZetaNumerator {
    std::uint32_t p = 0;
    std::uint32_t b = 0;
    std::vector<mpz_class> c;

    std::uint32_t two_g() const { return static_cast<std::uint32_t>(c.size()) - 1; }
};

// from point counts m = 1..2g; feasible only at tiny genus
ZetaNumerator zeta_numerator_direct(const CurveSpec&);

// q-adic slope multiset of the numerator's Newton polygon
SlopeMultiset slopes_of_numerator(const ZetaNumerator&);

// union over nonzero alpha in F_{p^ell} of the slopes of NP(L of alpha f)
SlopeMultiset zeta_slopes_product(const CurveSpec&, const LPolyOptions& = {});

struct OrdinaryReport {
    SlopeMultiset np;
    SlopeMultiset gnp_ref;  // p^ell - 1 copies of the generic polygon's slopes
    bool achieves = false;
    std::string note;
};

OrdinaryReport is_ordinary(const CurveSpec&, const LPolyOptions& = {});

}  // namespace asnp
