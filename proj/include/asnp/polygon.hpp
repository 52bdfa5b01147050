#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "asnp/rational.hpp"

namespace asnp {

struct PolygonPoint {
    mpq_class x, y;
    bool operator==(const PolygonPoint& o) const { return x == o.x && y == o.y; }
};

// lower convex hull: vertices strictly increasing in x, segment slopes strictly increasing,
// no interior collinear vertices
class NewtonPolygon {
public:
    NewtonPolygon() = default;
    static NewtonPolygon from_vertices(std::vector<PolygonPoint> v);

    const std::vector<PolygonPoint>& vertices() const { return v_; }
    std::size_t segment_count() const { return v_.empty() ? 0 : v_.size() - 1; }
    mpq_class width() const;
    const PolygonPoint& front() const { return v_.front(); }
    const PolygonPoint& back() const { return v_.back(); }
    // piecewise-linear value; pre: x within [front().x, back().x]
    mpq_class eval(const mpq_class& x) const;

    bool operator==(const NewtonPolygon& o) const { return v_ == o.v_; }
    bool operator!=(const NewtonPolygon& o) const { return !(*this == o); }

private:
    std::vector<PolygonPoint> v_;
};

// slopes ascending, multiplicities positive; equal slopes merged
class SlopeMultiset {
public:
    SlopeMultiset() = default;
    static SlopeMultiset from_pairs(std::vector<std::pair<mpq_class, mpq_class>> sm);

    const std::vector<std::pair<mpq_class, mpq_class>>& items() const { return sm_; }
    mpq_class total_multiplicity() const;

    bool operator==(const SlopeMultiset& o) const { return sm_ == o.sm_; }
    bool operator!=(const SlopeMultiset& o) const { return !(*this == o); }

private:
    std::vector<std::pair<mpq_class, mpq_class>> sm_;
};

// lower hull of (i, v_i); infinite values never support the hull and are skipped
NewtonPolygon hull_from_values(const std::vector<std::pair<long, ExtRational>>& points);

SlopeMultiset slopes(const NewtonPolygon&);
// rebuild a polygon from ascending slopes, starting at (0, 0)
NewtonPolygon polygon_from_slopes(const SlopeMultiset&);

// a lies on or above b everywhere; pre: same x-range
bool lies_above(const NewtonPolygon& a, const NewtonPolygon& b);

NewtonPolygon dilate(const NewtonPolygon&, const mpq_class& k);  // scales both coordinates, k > 0

// the initial part with slopes strictly below one
NewtonPolygon truncate_lt_one(const NewtonPolygon&);

SlopeMultiset union_slopes(const std::vector<SlopeMultiset>&);

std::string emit_csv(const NewtonPolygon&);  // header x,y_num,y_den
std::string emit_svg(const NewtonPolygon&);

std::string np_str(const NewtonPolygon&);
std::string slopes_str(const SlopeMultiset&);

}  // namespace asnp
