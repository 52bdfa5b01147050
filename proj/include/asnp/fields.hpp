#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace asnp {

// elements beyond this are never enumerated; ops that would stream a larger set refuse
inline constexpr std::uint64_t kEnumerationCap = 1ull << 40;

// small dense matrix over F_p
struct FpMat {
    std::uint32_t p = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> a;  // row-major

    FpMat() = default;
    FpMat(std::uint32_t p_, std::size_t r, std::size_t c) : p(p_), rows(r), cols(c), a(r * c, 0) {}
    static FpMat identity(std::uint32_t p, std::size_t n);

    std::uint32_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    FpMat operator*(const FpMat& o) const;
    FpMat operator+(const FpMat& o) const;
    FpMat operator-(const FpMat& o) const;
    FpMat pow(std::uint64_t e) const;
    std::vector<std::uint32_t> apply(const std::vector<std::uint32_t>& v) const;
    // basis of the right kernel, one vector per row, from reduced echelon form
    std::vector<std::vector<std::uint32_t>> kernel() const;
    std::optional<FpMat> inverse() const;
    bool operator==(const FpMat& o) const { return p == o.p && rows == o.rows && cols == o.cols && a == o.a; }
};

// F_{p^n} with the lexicographically least monic irreducible defining polynomial
// (coefficients compared low-to-high).  Immutable after construction; share freely.
class FieldDesc {
public:
    std::uint32_t p;
    std::uint32_t n;
    std::uint64_t q;                     // p^n
    std::vector<std::uint32_t> defpoly;  // length n+1, monic
    std::vector<std::uint32_t> trace_basis;  // Tr(x^i) for i < n
    FpMat frob;                              // matrix of a -> a^p on the power basis

    std::vector<std::uint32_t> add(const std::vector<std::uint32_t>&, const std::vector<std::uint32_t>&) const;
    std::vector<std::uint32_t> sub(const std::vector<std::uint32_t>&, const std::vector<std::uint32_t>&) const;
    std::vector<std::uint32_t> neg(const std::vector<std::uint32_t>&) const;
    std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>&, const std::vector<std::uint32_t>&) const;
    std::vector<std::uint32_t> inv(const std::vector<std::uint32_t>&) const;
    std::vector<std::uint32_t> pow(std::vector<std::uint32_t>, std::uint64_t e) const;

    FieldDesc(std::uint32_t p_, std::uint32_t n_);
};

using Field = std::shared_ptr<const FieldDesc>;

// cached; repeated calls for the same (p, n) return the same object
Field build_field(std::uint32_t p, std::uint32_t n);

struct FqElem {
    Field field;
    std::vector<std::uint32_t> c;  // little-endian on the power basis, size n

    bool is_zero() const;
    bool operator==(const FqElem& o) const;
    bool operator!=(const FqElem& o) const { return !(*this == o); }
};

FqElem operator+(const FqElem&, const FqElem&);
FqElem operator-(const FqElem&, const FqElem&);
FqElem operator-(const FqElem&);
FqElem operator*(const FqElem&, const FqElem&);
FqElem operator/(const FqElem&, const FqElem&);

FqElem fq_zero(const Field&);
FqElem fq_one(const Field&);
FqElem fq_from_int(const Field&, long v);  // v mod p as a constant
FqElem fq_gen(const Field&);               // class of x
FqElem fq_pow(const FqElem&, std::uint64_t e);
FqElem fq_inv(const FqElem&);

// odometer order: index = sum c_i p^i
FqElem element_at(const Field&, std::uint64_t index);
std::uint64_t index_of(const FqElem&);

FqElem frobenius(const FqElem&, unsigned k = 1);  // a^(p^k)

std::uint32_t trace_abs(const FqElem&);  // Tr down to F_p

// Tr_{F_{p^ell}/F_p}(a); pre: a lies in the degree-ell subfield
std::uint32_t subfield_trace(const FqElem&, std::uint32_t ell);

bool in_subfield(const FqElem&, std::uint32_t ell);

// the p^ell elements fixed by frob^ell, deterministic order, element 0 first
std::vector<FqElem> subfield_elements(const Field&, std::uint32_t ell);

// trace-dual basis inside the degree-ell subfield: Tr(b_i * d_j) = delta_ij
std::vector<FqElem> dual_basis(const std::vector<FqElem>& basis, std::uint32_t ell);

// matrix over F_p of a -> Tr_{F_q/F_{p^ell}}(a)
FpMat rel_trace_matrix(const Field&, std::uint32_t ell);

// field homomorphism F_{p^m} -> F_{p^(mk)}, pinned by sending the source
// generator to the first root of the source defining polynomial among
// subfield_elements(to, m); the identity when the fields coincide
struct Embedding {
    Field from, to;
    std::vector<std::vector<std::uint32_t>> powers;  // image of x^j, j < m
};

Embedding make_embedding(const Field& from, const Field& to);
FqElem embed(const Embedding&, const FqElem&);

std::string fq_str(const FqElem&);

}  // namespace asnp
