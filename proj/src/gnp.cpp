#include "asnp/gnp.hpp"

#include <climits>
#include <numeric>

#include "asnp/check.hpp"
#include "asnp/intutil.hpp"

namespace asnp {

ResidueTables residue_tables(std::uint32_t d, std::uint32_t r) {
    require(d >= 2, "residue_tables: d must be >= 2");
    require(r >= 1 && r < d && std::gcd(r, d) == 1, "residue_tables: r must be a unit mod d");
    ResidueTables t;
    t.d = d;
    t.r = r;
    t.rij.assign(d - 1, std::vector<std::uint32_t>(d - 1));
    t.rij_pr.assign(d - 1, std::vector<std::uint32_t>(d - 1));
    for (std::uint32_t i = 1; i < d; ++i)
        for (std::uint32_t j = 1; j < d; ++j) {
            long long v = static_cast<long long>(r) * i - j;
            long long m = ((v % d) + d) % d;
            t.rij_pr[i - 1][j - 1] = static_cast<std::uint32_t>(m);
            t.rij[i - 1][j - 1] = static_cast<std::uint32_t>((d - m) % d);
        }
    return t;
}

long long assignment_min_value(const std::vector<std::vector<long long>>& cost) {
    const int n = static_cast<int>(cost.size());
    require(n >= 1, "assignment_min: empty cost matrix");
    for (const auto& row : cost) require(static_cast<int>(row.size()) == n, "assignment_min: not square");
    const long long INF = LLONG_MAX / 4;
    // potentials method, O(n^3), exact in 64-bit
    std::vector<long long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), INF);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = -1;
            long long delta = INF;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    long long total = 0;
    for (int j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
    return total;
}

namespace {

void minimizer_dfs(const std::vector<std::vector<long long>>& cost, long long target, int row,
                   long long partial, std::vector<std::uint32_t>& perm, std::vector<bool>& used,
                   std::vector<std::vector<std::uint32_t>>& out) {
    const int n = static_cast<int>(cost.size());
    if (row == n) {
        if (partial == target) out.push_back(perm);
        return;
    }
    // lower bound: per-row minimum over unused columns for all remaining rows
    long long lb = 0;
    for (int i = row; i < n; ++i) {
        long long m = LLONG_MAX;
        for (int j = 0; j < n; ++j)
            if (!used[j] && cost[i][j] < m) m = cost[i][j];
        lb += m;
    }
    if (partial + lb > target) return;
    for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        used[j] = true;
        perm[row] = static_cast<std::uint32_t>(j);
        minimizer_dfs(cost, target, row + 1, partial + cost[row][j], perm, used, out);
        used[j] = false;
    }
}

}  // namespace

AssignmentResult assignment_min(const std::vector<std::vector<long long>>& cost) {
    require(cost.size() <= 12, "assignment_min: minimizer enumeration capped at n = 12");
    AssignmentResult r;
    r.value = assignment_min_value(cost);
    std::vector<std::uint32_t> perm(cost.size(), 0);
    std::vector<bool> used(cost.size(), false);
    minimizer_dfs(cost, r.value, 0, 0, perm, used, r.minimizers);
    ensure(!r.minimizers.empty(), "assignment_min: no minimizer found");
    return r;
}

std::vector<std::vector<long long>> m_cost_matrix(const ResidueTables& t, std::uint32_t n,
                                                  bool primed) {
    require(n >= 1 && n < t.d, "m_cost_matrix: need 1 <= n <= d-1");
    std::vector<std::vector<long long>> c(n, std::vector<long long>(n));
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j)
            c[i - 1][j - 1] = primed ? t.at_pr(i, j) : t.at(i, j);
    return c;
}

namespace {

GnpResult gnp_from_weights(std::uint32_t d, std::uint32_t p, bool primed) {
    require(is_prime64(p), "gnp: p must be prime");
    require(d >= 2 && p % d != 0 && std::gcd(p, d) == 1, "gnp: p must not divide d");
    std::uint32_t r = p % d;
    ResidueTables t = residue_tables(d, r);
    GnpResult out;
    std::vector<std::pair<long, ExtRational>> pts;
    pts.emplace_back(0, ExtRational(0, 1));
    for (std::uint32_t n = 1; n < d; ++n) {
        long long mn = assignment_min_value(m_cost_matrix(t, n, primed));
        out.m_values.push_back(mn);
        // w_n = n(n+1)/(2d) + c * M_n / (d(p-1)), c = d-1 for the one-parameter family
        mpq_class w(static_cast<long>(n) * (n + 1), 2L * d);
        w.canonicalize();
        mpq_class corr(static_cast<long>(mn) * (primed ? static_cast<long>(d - 1) : 1L),
                       static_cast<long>(d) * (p - 1));
        corr.canonicalize();
        w += corr;
        pts.emplace_back(static_cast<long>(n), ExtRational(w));
    }
    // the top assignment is free, so the endpoint is always (d-1, (d-1)/2)
    ensure(out.m_values.back() == 0, "gnp: M_(d-1) must vanish");
    out.polygon = hull_from_values(pts);
    out.vertices_degenerate = out.polygon.vertices().size() != d;
    return out;
}

}  // namespace

GnpResult gnp_full(std::uint32_t d, std::uint32_t p) { return gnp_from_weights(d, p, false); }

GnpResult gnp_one_param(std::uint32_t d, std::uint32_t p) { return gnp_from_weights(d, p, true); }

NewtonPolygon hodge(std::uint32_t d) {
    require(d >= 2, "hodge: d must be >= 2");
    std::vector<PolygonPoint> v;
    for (std::uint32_t n = 0; n < d; ++n) {
        mpq_class w(static_cast<long>(n) * (n + 1), 2L * d);
        w.canonicalize();
        v.push_back({mpq_class(static_cast<long>(n)), w});
    }
    return NewtonPolygon::from_vertices(std::move(v));
}

SlopeMultiset hodge_curve(std::uint32_t d, std::uint32_t p, std::uint32_t ell) {
    require(is_prime64(p), "hodge_curve: p must be prime");
    std::uint64_t pl = checked_pow64(p, ell);
    return slopes(dilate(hodge(d), mpq_class(static_cast<long>(pl - 1))));
}

std::vector<long long> epsilon_slopes(std::uint32_t d, std::uint32_t p) {
    GnpResult g = gnp_full(d, p);
    std::vector<long long> eps;
    long long prev = 0, sum = 0;
    for (std::uint32_t i = 1; i < d; ++i) {
        long long e = g.m_values[i - 1] - prev;
        prev = g.m_values[i - 1];
        ensure(e >= -static_cast<long long>(i - 1) * (d - 1) && e <= static_cast<long long>(i) * (d - 1),
               "epsilon_slopes: bound violated");
        eps.push_back(e);
        sum += e;
    }
    ensure(sum == 0, "epsilon_slopes: differences must sum to zero");
    return eps;
}

}  // namespace asnp
