#include "asnp/fields.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "asnp/check.hpp"
#include "asnp/intutil.hpp"

namespace asnp {

// ---------------------------------------------------------------- FpMat

FpMat FpMat::identity(std::uint32_t p, std::size_t n) {
    FpMat m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMat FpMat::operator*(const FpMat& o) const {
    require(p == o.p && cols == o.rows, "FpMat: shape mismatch in mul");
    FpMat r(p, rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < o.cols; ++j) {
            std::uint64_t s = 0;
            for (std::size_t k = 0; k < cols; ++k) s += std::uint64_t(at(i, k)) * o.at(k, j) % p;
            r.at(i, j) = static_cast<std::uint32_t>(s % p);
        }
    return r;
}

FpMat FpMat::operator+(const FpMat& o) const {
    require(p == o.p && rows == o.rows && cols == o.cols, "FpMat: shape mismatch in add");
    FpMat r(p, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = (a[i] + o.a[i]) % p;
    return r;
}

FpMat FpMat::operator-(const FpMat& o) const {
    require(p == o.p && rows == o.rows && cols == o.cols, "FpMat: shape mismatch in sub");
    FpMat r(p, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = (a[i] + p - o.a[i]) % p;
    return r;
}

FpMat FpMat::pow(std::uint64_t e) const {
    require(rows == cols, "FpMat: pow needs a square matrix");
    FpMat r = identity(p, rows), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::vector<std::uint32_t> FpMat::apply(const std::vector<std::uint32_t>& v) const {
    require(v.size() == cols, "FpMat: apply length mismatch");
    std::vector<std::uint32_t> r(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < cols; ++k) s += std::uint64_t(at(i, k)) * v[k] % p;
        r[i] = static_cast<std::uint32_t>(s % p);
    }
    return r;
}

namespace {

// reduced row echelon form in place; returns pivot column of each pivot row
std::vector<std::size_t> rref(FpMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
        std::uint64_t inv = invmod64(m.at(row, col), m.p);
        for (std::size_t j = 0; j < m.cols; ++j)
            m.at(row, j) = static_cast<std::uint32_t>(m.at(row, j) * inv % m.p);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            std::uint64_t f = m.at(i, col);
            for (std::size_t j = 0; j < m.cols; ++j)
                m.at(i, j) = static_cast<std::uint32_t>((m.at(i, j) + (m.p - f) * m.at(row, j)) % m.p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> FpMat::kernel() const {
    FpMat m = *this;
    std::vector<std::size_t> pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t freec = 0; freec < cols; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<std::uint32_t> v(cols, 0);
        v[freec] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = (p - m.at(r, freec)) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<FpMat> FpMat::inverse() const {
    require(rows == cols, "FpMat: inverse needs a square matrix");
    FpMat aug(p, rows, 2 * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols + i) = 1;
    }
    std::vector<std::size_t> pivots = rref(aug);
    if (pivots.size() != rows) return std::nullopt;
    for (std::size_t r = 0; r < rows; ++r)
        if (pivots[r] != r) return std::nullopt;
    FpMat inv(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) inv.at(i, j) = aug.at(i, cols + j);
    return inv;
}

// ------------------------------------------------- dense F_p[x] helpers

namespace {

using Poly = std::vector<std::uint32_t>;  // little-endian, may carry trailing zeros

std::size_t pdeg(const Poly& f) {
    std::size_t i = f.size();
    while (i > 0 && f[i - 1] == 0) --i;
    return i == 0 ? std::size_t(-1) : i - 1;  // -1 marks the zero polynomial
}

Poly ptrim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly pmul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
    return r;
}

// remainder mod a monic divisor
Poly pmod(Poly a, const Poly& m, std::uint32_t p) {
    std::size_t dm = pdeg(m);
    ensure(dm != std::size_t(-1) && m[dm] == 1, "pmod: divisor must be monic");
    while (true) {
        std::size_t da = pdeg(a);
        if (da == std::size_t(-1) || da < dm) break;
        std::uint64_t c = a[da];
        std::size_t shift = da - dm;
        for (std::size_t j = 0; j <= dm; ++j)
            a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + (p - m[j]) * c) % p);
    }
    a.resize(dm);
    return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
    return pmod(pmul(a, b, p), m, p);
}

Poly ppowmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
    Poly r = {1};
    base = pmod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = pmulmod(r, base, m, p);
        base = pmulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Poly pgcd(Poly a, Poly b, std::uint32_t p) {
    a = ptrim(std::move(a));
    b = ptrim(std::move(b));
    while (!b.empty()) {
        std::size_t db = pdeg(b);
        std::uint64_t lead_inv = invmod64(b[db], p);
        Poly bm(b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            bm[i] = static_cast<std::uint32_t>(b[i] * lead_inv % p);
        Poly r = ptrim(pmod(std::move(a), bm, p));
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Rabin: f of degree n is irreducible iff x^(p^n) = x mod f and
// gcd(x^(p^(n/t)) - x, f) = 1 for every prime t | n
bool irreducible(const Poly& f, std::uint32_t p, std::uint32_t n) {
    if (n == 1) return true;
    Poly x = {0, 1};
    // frob_pows[k] = x^(p^(k+1)) mod f
    std::vector<Poly> frob_pows;
    Poly cur = x;
    for (std::uint32_t k = 0; k < n; ++k) {
        cur = ppowmod(cur, p, f, p);
        frob_pows.push_back(cur);
    }
    Poly xn = frob_pows[n - 1];
    xn.resize(std::max<std::size_t>(xn.size(), 2));
    if (ptrim(xn) != ptrim(x)) return false;
    for (std::uint32_t t = 2; t <= n; ++t) {
        if (n % t != 0 || !is_prime64(t)) continue;
        Poly g = frob_pows[n / t - 1];
        g.resize(std::max<std::size_t>(g.size(), 2));
        g[1] = (g[1] + p - 1) % p;
        if (pdeg(pgcd(g, f, p)) != 0) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------- FieldDesc

FieldDesc::FieldDesc(std::uint32_t p_, std::uint32_t n_) : p(p_), n(n_) {
    require(n >= 1, "build_field: n must be >= 1");
    require(p >= 2 && p < (1u << 28), "build_field: p out of range");
    require(is_prime64(p), "build_field: p must be prime");
    unsigned __int128 qq = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        qq *= p;
        require(qq < (static_cast<unsigned __int128>(1) << 62), "build_field: p^n too large");
    }
    q = static_cast<std::uint64_t>(qq);

    if (n == 1) {
        defpoly = {0, 1};
    } else {
        // tuples (c_0..c_{n-1}) in lex order, low coefficient most significant
        bool found = false;
        for (std::uint64_t t = 0; t < q && !found; ++t) {
            Poly f(n + 1, 0);
            f[n] = 1;
            std::uint64_t v = t;
            // digit k of t (least significant first) is c_{n-1-k}
            for (std::uint32_t k = 0; k < n; ++k) {
                f[n - 1 - k] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            if (irreducible(f, p, n)) {
                defpoly = f;
                found = true;
            }
        }
        ensure(found, "build_field: no irreducible polynomial found");
    }

    // frobenius matrix: column j holds (x^j)^p mod defpoly
    frob = FpMat(p, n, n);
    if (n == 1) {
        frob.at(0, 0) = 1;
    } else {
        Poly xp = ppowmod({0, 1}, p, defpoly, p);
        Poly col = {1};
        for (std::uint32_t j = 0; j < n; ++j) {
            col.resize(n, 0);
            for (std::uint32_t i = 0; i < n; ++i) frob.at(i, j) = col[i];
            col = pmulmod(col, xp, defpoly, p);
        }
    }

    // trace of basis powers: Tr(x^i) = sum_j (x^(p^j))^i, an F_p constant
    trace_basis.assign(n, 0);
    std::vector<std::vector<std::uint32_t>> yj;  // conjugates of x
    std::vector<std::uint32_t> y(n, 0);
    if (n == 1)
        y[0] = 0;  // x = 0 in F_p[x]/(x)
    else
        y[1] = 1;
    for (std::uint32_t j = 0; j < n; ++j) {
        yj.push_back(y);
        y = frob.apply(y);
    }
    // sums[i] = sum_j yj[j]^i as field elements; each must be a constant
    std::vector<std::vector<std::uint32_t>> sums(n, std::vector<std::uint32_t>(n, 0));
    for (std::uint32_t j = 0; j < n; ++j) {
        std::vector<std::uint32_t> acc(n, 0);
        acc[0] = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t k = 0; k < n; ++k) sums[i][k] = (sums[i][k] + acc[k]) % p;
            if (i + 1 < n) acc = mul(acc, yj[j]);
        }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t k = 1; k < n; ++k)
            ensure(sums[i][k] == 0, "build_field: trace of basis power not in F_p");
        trace_basis[i] = sums[i][0];
    }
}

std::vector<std::uint32_t> FieldDesc::add(const std::vector<std::uint32_t>& a,
                                          const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> r(n);
    for (std::uint32_t i = 0; i < n; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
}

std::vector<std::uint32_t> FieldDesc::sub(const std::vector<std::uint32_t>& a,
                                          const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> r(n);
    for (std::uint32_t i = 0; i < n; ++i) r[i] = (a[i] + p - b[i]) % p;
    return r;
}

std::vector<std::uint32_t> FieldDesc::neg(const std::vector<std::uint32_t>& a) const {
    std::vector<std::uint32_t> r(n);
    for (std::uint32_t i = 0; i < n; ++i) r[i] = (p - a[i]) % p;
    return r;
}

std::vector<std::uint32_t> FieldDesc::mul(const std::vector<std::uint32_t>& a,
                                          const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint64_t> tmp(2 * n - 1, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::uint32_t j = 0; j < n; ++j) tmp[i + j] += std::uint64_t(a[i]) * b[j];
    }
    // monic reduction, accumulators stay below 2^62 for p < 2^28, n <= 64
    for (std::size_t i = 2 * n - 2; i + 1 > n; --i) {
        std::uint64_t c = tmp[i] % p;
        if (c == 0) continue;
        for (std::uint32_t j = 0; j < n; ++j) tmp[i - n + j] += c * (p - defpoly[j]) % p;
    }
    std::vector<std::uint32_t> r(n);
    for (std::uint32_t i = 0; i < n; ++i) r[i] = static_cast<std::uint32_t>(tmp[i] % p);
    return r;
}

std::vector<std::uint32_t> FieldDesc::pow(std::vector<std::uint32_t> base, std::uint64_t e) const {
    std::vector<std::uint32_t> r(n, 0);
    r[0] = 1;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

std::vector<std::uint32_t> FieldDesc::inv(const std::vector<std::uint32_t>& a) const {
    bool zero = true;
    for (auto v : a)
        if (v) zero = false;
    require(!zero, "field inverse of zero");
    return pow(a, q - 2);
}

Field build_field(std::uint32_t p, std::uint32_t n) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, Field> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Field f = std::make_shared<const FieldDesc>(p, n);
    cache[key] = f;
    return f;
}

// ------------------------------------------------------------ FqElem

namespace {
const FieldDesc& same_field(const FqElem& a, const FqElem& b) {
    require(a.field && b.field, "FqElem: missing field");
    require(a.field->p == b.field->p && a.field->n == b.field->n, "FqElem: field mismatch");
    return *a.field;
}
}  // namespace

bool FqElem::is_zero() const {
    for (auto v : c)
        if (v) return false;
    return true;
}

bool FqElem::operator==(const FqElem& o) const {
    same_field(*this, o);
    return c == o.c;
}

FqElem operator+(const FqElem& a, const FqElem& b) { return {a.field, same_field(a, b).add(a.c, b.c)}; }
FqElem operator-(const FqElem& a, const FqElem& b) { return {a.field, same_field(a, b).sub(a.c, b.c)}; }
FqElem operator-(const FqElem& a) { return {a.field, a.field->neg(a.c)}; }
FqElem operator*(const FqElem& a, const FqElem& b) { return {a.field, same_field(a, b).mul(a.c, b.c)}; }
FqElem operator/(const FqElem& a, const FqElem& b) {
    return {a.field, same_field(a, b).mul(a.c, b.field->inv(b.c))};
}

FqElem fq_zero(const Field& f) { return {f, std::vector<std::uint32_t>(f->n, 0)}; }

FqElem fq_one(const Field& f) {
    FqElem e = fq_zero(f);
    e.c[0] = 1;
    return e;
}

FqElem fq_from_int(const Field& f, long v) {
    FqElem e = fq_zero(f);
    long m = v % static_cast<long>(f->p);
    if (m < 0) m += f->p;
    e.c[0] = static_cast<std::uint32_t>(m);
    return e;
}

FqElem fq_gen(const Field& f) {
    FqElem e = fq_zero(f);
    if (f->n >= 2) e.c[1] = 1;
    return e;  // for n = 1 the class of x is 0
}

FqElem fq_pow(const FqElem& a, std::uint64_t e) { return {a.field, a.field->pow(a.c, e)}; }
FqElem fq_inv(const FqElem& a) { return {a.field, a.field->inv(a.c)}; }

FqElem element_at(const Field& f, std::uint64_t index) {
    require(index < f->q, "element_at: index out of range");
    FqElem e = fq_zero(f);
    for (std::uint32_t i = 0; i < f->n && index; ++i) {
        e.c[i] = static_cast<std::uint32_t>(index % f->p);
        index /= f->p;
    }
    return e;
}

std::uint64_t index_of(const FqElem& a) {
    std::uint64_t idx = 0;
    for (std::uint32_t i = a.field->n; i-- > 0;) idx = idx * a.field->p + a.c[i];
    return idx;
}

FqElem frobenius(const FqElem& a, unsigned k) {
    FqElem r = a;
    for (unsigned i = 0; i < k % a.field->n; ++i) r.c = a.field->frob.apply(r.c);
    return r;
}

std::uint32_t trace_abs(const FqElem& a) {
    const FieldDesc& f = *a.field;
    std::uint64_t s = 0;
    for (std::uint32_t i = 0; i < f.n; ++i) s += std::uint64_t(a.c[i]) * f.trace_basis[i] % f.p;
    return static_cast<std::uint32_t>(s % f.p);
}

bool in_subfield(const FqElem& a, std::uint32_t ell) {
    require(ell >= 1 && a.field->n % ell == 0, "in_subfield: ell must divide the extension degree");
    return frobenius(a, ell) == a;
}

std::uint32_t subfield_trace(const FqElem& a, std::uint32_t ell) {
    require(in_subfield(a, ell), "subfield_trace: element not in the degree-ell subfield");
    FqElem s = a;
    FqElem t = a;
    for (std::uint32_t j = 1; j < ell; ++j) {
        t = frobenius(t, 1);
        s = s + t;
    }
    for (std::uint32_t k = 1; k < a.field->n; ++k)
        ensure(s.c[k] == 0, "subfield_trace: result not in F_p");
    return s.c[0];
}

std::vector<FqElem> subfield_elements(const Field& f, std::uint32_t ell) {
    require(ell >= 1 && f->n % ell == 0, "subfield_elements: ell must divide the extension degree");
    std::uint64_t count = checked_pow64(f->p, ell);
    require(count <= kEnumerationCap, "subfield_elements: subfield too large to enumerate");
    FpMat fr = f->frob.pow(ell) - FpMat::identity(f->p, f->n);
    std::vector<std::vector<std::uint32_t>> basis = fr.kernel();
    ensure(basis.size() == ell, "subfield_elements: subfield dimension mismatch");
    std::vector<FqElem> out;
    out.reserve(count);
    for (std::uint64_t t = 0; t < count; ++t) {
        FqElem e = fq_zero(f);
        std::uint64_t v = t;
        for (std::uint32_t j = 0; j < ell; ++j) {
            std::uint32_t lam = static_cast<std::uint32_t>(v % f->p);
            v /= f->p;
            if (lam)
                for (std::uint32_t k = 0; k < f->n; ++k)
                    e.c[k] = static_cast<std::uint32_t>((e.c[k] + std::uint64_t(lam) * basis[j][k]) % f->p);
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<FqElem> dual_basis(const std::vector<FqElem>& basis, std::uint32_t ell) {
    require(basis.size() == ell && ell >= 1, "dual_basis: need exactly ell elements");
    const Field& f = basis[0].field;
    for (const FqElem& b : basis) {
        same_field(basis[0], b);
        require(in_subfield(b, ell), "dual_basis: element not in the degree-ell subfield");
    }
    FpMat gram(f->p, ell, ell);
    for (std::uint32_t i = 0; i < ell; ++i)
        for (std::uint32_t j = 0; j < ell; ++j) gram.at(i, j) = subfield_trace(basis[i] * basis[j], ell);
    std::optional<FpMat> ginv = gram.inverse();
    require(ginv.has_value(), "dual_basis: elements are not a basis over F_p");
    std::vector<FqElem> duals;
    duals.reserve(ell);
    for (std::uint32_t j = 0; j < ell; ++j) {
        FqElem d = fq_zero(f);
        for (std::uint32_t k = 0; k < ell; ++k) {
            std::uint32_t coef = ginv->at(k, j);
            if (coef) d = d + fq_from_int(f, coef) * basis[k];
        }
        duals.push_back(std::move(d));
    }
    for (std::uint32_t i = 0; i < ell; ++i)
        for (std::uint32_t j = 0; j < ell; ++j)
            ensure(subfield_trace(basis[i] * duals[j], ell) == (i == j ? 1u : 0u),
                   "dual_basis: duality check failed");
    return duals;
}

FpMat rel_trace_matrix(const Field& f, std::uint32_t ell) {
    require(ell >= 1 && f->n % ell == 0, "rel_trace_matrix: ell must divide the extension degree");
    FpMat acc(f->p, f->n, f->n);
    FpMat fl = f->frob.pow(ell);
    FpMat cur = FpMat::identity(f->p, f->n);
    for (std::uint32_t j = 0; j < f->n / ell; ++j) {
        acc = acc + cur;
        cur = cur * fl;
    }
    return acc;
}

Embedding make_embedding(const Field& from, const Field& to) {
    require(from->p == to->p, "make_embedding: different characteristics");
    require(to->n % from->n == 0, "make_embedding: target degree not a multiple of the source degree");
    Embedding e;
    e.from = from;
    e.to = to;
    std::uint32_t m = from->n;
    if (from->n == to->n) {
        for (std::uint32_t j = 0; j < m; ++j) {
            std::vector<std::uint32_t> pw(to->n, 0);
            pw[j] = 1;
            e.powers.push_back(std::move(pw));
        }
        return e;
    }
    // the roots of the source defining polynomial all lie in the degree-m subfield
    FqElem root = fq_zero(to);
    bool found = false;
    for (const FqElem& z : subfield_elements(to, m)) {
        FqElem val = fq_pow(z, m);
        FqElem zp = fq_one(to);
        for (std::uint32_t j = 0; j < m; ++j) {
            if (from->defpoly[j]) val = val + fq_from_int(to, from->defpoly[j]) * zp;
            zp = zp * z;
        }
        if (val.is_zero()) {
            root = z;
            found = true;
            break;
        }
    }
    ensure(found, "make_embedding: no root of the defining polynomial in the subfield");
    FqElem pw = fq_one(to);
    for (std::uint32_t j = 0; j < m; ++j) {
        e.powers.push_back(pw.c);
        pw = pw * root;
    }
    return e;
}

FqElem embed(const Embedding& e, const FqElem& a) {
    require(a.field == e.from, "embed: element not in the source field");
    FqElem out = fq_zero(e.to);
    const std::uint64_t p = e.to->p;
    for (std::uint32_t j = 0; j < e.from->n; ++j) {
        std::uint64_t c = a.c[j];
        if (!c) continue;
        for (std::uint32_t i = 0; i < e.to->n; ++i)
            out.c[i] = static_cast<std::uint32_t>((out.c[i] + c * e.powers[j][i]) % p);
    }
    return out;
}

std::string fq_str(const FqElem& a) {
    std::ostringstream os;
    os << "[";
    for (std::uint32_t i = 0; i < a.field->n; ++i) {
        if (i) os << ",";
        os << a.c[i];
    }
    os << "]@F_" << a.field->p;
    if (a.field->n > 1) os << "^" << a.field->n;
    return os.str();
}

}  // namespace asnp
