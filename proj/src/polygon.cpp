#include "asnp/polygon.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "asnp/check.hpp"

namespace asnp {

namespace {

// twice the signed area of (a, b, c); negative when c is below line ab
mpq_class cross(const PolygonPoint& a, const PolygonPoint& b, const PolygonPoint& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

NewtonPolygon NewtonPolygon::from_vertices(std::vector<PolygonPoint> v) {
    require(!v.empty(), "NewtonPolygon: need at least one vertex");
    for (std::size_t i = 1; i < v.size(); ++i)
        require(v[i - 1].x < v[i].x, "NewtonPolygon: x must be strictly increasing");
    for (std::size_t i = 2; i < v.size(); ++i)
        require(cross(v[i - 2], v[i - 1], v[i]) > 0, "NewtonPolygon: slopes must strictly increase");
    NewtonPolygon np;
    np.v_ = std::move(v);
    return np;
}

mpq_class NewtonPolygon::width() const {
    require(!v_.empty(), "NewtonPolygon: empty");
    return v_.back().x - v_.front().x;
}

mpq_class NewtonPolygon::eval(const mpq_class& x) const {
    require(!v_.empty() && x >= v_.front().x && x <= v_.back().x, "NewtonPolygon: eval out of range");
    for (std::size_t i = 1; i < v_.size(); ++i) {
        if (x <= v_[i].x) {
            mpq_class slope = (v_[i].y - v_[i - 1].y) / (v_[i].x - v_[i - 1].x);
            return v_[i - 1].y + (x - v_[i - 1].x) * slope;
        }
    }
    return v_.back().y;  // single vertex, x equals it
}

SlopeMultiset SlopeMultiset::from_pairs(std::vector<std::pair<mpq_class, mpq_class>> sm) {
    std::map<mpq_class, mpq_class> acc;
    for (auto& [s, m] : sm) {
        require(m > 0, "SlopeMultiset: multiplicities must be positive");
        acc[s] += m;
    }
    SlopeMultiset r;
    for (auto& [s, m] : acc) r.sm_.emplace_back(s, m);
    return r;
}

mpq_class SlopeMultiset::total_multiplicity() const {
    mpq_class t = 0;
    for (const auto& [s, m] : sm_) t += m;
    return t;
}

NewtonPolygon hull_from_values(const std::vector<std::pair<long, ExtRational>>& points) {
    std::vector<PolygonPoint> pts;
    for (const auto& [x, v] : points) {
        if (v.is_infinite()) continue;
        pts.push_back({mpq_class(x), v.value()});
    }
    require(!pts.empty(), "hull_from_values: no finite points");
    std::sort(pts.begin(), pts.end(),
              [](const PolygonPoint& a, const PolygonPoint& b) { return a.x < b.x; });
    for (std::size_t i = 1; i < pts.size(); ++i)
        require(pts[i - 1].x != pts[i].x, "hull_from_values: duplicate x");
    // monotone chain, lower hull only; collinear middle points dropped
    std::vector<PolygonPoint> hull;
    for (const PolygonPoint& pt : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
        hull.push_back(pt);
    }
    return NewtonPolygon::from_vertices(std::move(hull));
}

SlopeMultiset slopes(const NewtonPolygon& np) {
    std::vector<std::pair<mpq_class, mpq_class>> sm;
    const auto& v = np.vertices();
    for (std::size_t i = 1; i < v.size(); ++i) {
        mpq_class dx = v[i].x - v[i - 1].x;
        sm.emplace_back((v[i].y - v[i - 1].y) / dx, dx);
    }
    return SlopeMultiset::from_pairs(std::move(sm));
}

NewtonPolygon polygon_from_slopes(const SlopeMultiset& ms) {
    std::vector<PolygonPoint> v;
    v.push_back({0, 0});
    for (const auto& [s, m] : ms.items()) {
        PolygonPoint last = v.back();
        v.push_back({last.x + m, last.y + s * m});
    }
    return NewtonPolygon::from_vertices(std::move(v));
}

bool lies_above(const NewtonPolygon& a, const NewtonPolygon& b) {
    require(a.front().x == b.front().x && a.back().x == b.back().x,
            "lies_above: polygons must share their x-range");
    std::vector<mpq_class> xs;
    for (const auto& pt : a.vertices()) xs.push_back(pt.x);
    for (const auto& pt : b.vertices()) xs.push_back(pt.x);
    for (const mpq_class& x : xs)
        if (a.eval(x) < b.eval(x)) return false;
    return true;
}

NewtonPolygon dilate(const NewtonPolygon& np, const mpq_class& k) {
    require(k > 0, "dilate: factor must be positive");
    std::vector<PolygonPoint> v = np.vertices();
    for (PolygonPoint& pt : v) {
        pt.x *= k;
        pt.y *= k;
    }
    return NewtonPolygon::from_vertices(std::move(v));
}

NewtonPolygon truncate_lt_one(const NewtonPolygon& np) {
    const auto& v = np.vertices();
    std::vector<PolygonPoint> out;
    out.push_back(v.front());
    for (std::size_t i = 1; i < v.size(); ++i) {
        mpq_class slope = (v[i].y - v[i - 1].y) / (v[i].x - v[i - 1].x);
        if (slope >= 1) break;
        out.push_back(v[i]);
    }
    return NewtonPolygon::from_vertices(std::move(out));
}

SlopeMultiset union_slopes(const std::vector<SlopeMultiset>& parts) {
    std::vector<std::pair<mpq_class, mpq_class>> sm;
    for (const SlopeMultiset& part : parts)
        for (const auto& item : part.items()) sm.push_back(item);
    return SlopeMultiset::from_pairs(std::move(sm));
}

std::string emit_csv(const NewtonPolygon& np) {
    std::ostringstream os;
    os << "x,y_num,y_den\n";
    for (const auto& pt : np.vertices())
        os << pt.x.get_str() << "," << pt.y.get_num().get_str() << "," << pt.y.get_den().get_str()
           << "\n";
    return os.str();
}

std::string emit_svg(const NewtonPolygon& np) {
    const double W = 640, H = 400, M = 48;
    const auto& v = np.vertices();
    double x0 = v.front().x.get_d(), x1 = v.back().x.get_d();
    double y0 = v.front().y.get_d(), y1 = y0;
    for (const auto& pt : v) {
        y0 = std::min(y0, pt.y.get_d());
        y1 = std::max(y1, pt.y.get_d());
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto sx = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
    auto sy = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // integer x gridlines when the span is small enough to draw them
    if (x1 - x0 <= 64) {
        for (long gx = static_cast<long>(x0); gx <= static_cast<long>(x1); ++gx) {
            if (gx < x0) continue;
            os << "<line x1=\"" << sx(gx) << "\" y1=\"" << sy(y0) << "\" x2=\"" << sx(gx)
               << "\" y2=\"" << sy(y1) << "\" stroke=\"#ddd\"/>\n";
            os << "<text x=\"" << sx(gx) << "\" y=\"" << H - M / 3 << "\" font-size=\"12\" "
               << "text-anchor=\"middle\">" << gx << "</text>\n";
        }
    }
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (const auto& pt : v) os << sx(pt.x.get_d()) << "," << sy(pt.y.get_d()) << " ";
    os << "\"/>\n";
    for (const auto& pt : v)
        os << "<circle cx=\"" << sx(pt.x.get_d()) << "\" cy=\"" << sy(pt.y.get_d())
           << "\" r=\"3\" fill=\"#1f4e9c\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::string np_str(const NewtonPolygon& np) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < np.vertices().size(); ++i) {
        if (i) os << " ";
        os << "(" << np.vertices()[i].x.get_str() << "," << np.vertices()[i].y.get_str() << ")";
    }
    os << "}";
    return os.str();
}

std::string slopes_str(const SlopeMultiset& ms) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < ms.items().size(); ++i) {
        if (i) os << " ";
        os << ms.items()[i].first.get_str() << "x" << ms.items()[i].second.get_str();
    }
    os << "}";
    return os.str();
}

}  // namespace asnp
