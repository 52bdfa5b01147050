#pragma once

#include <gmpxx.h>

#include <string>

#include "asnp/check.hpp"

namespace asnp {

// exact rational extended with +infinity; used for p-adic valuations (v(0) = +inf)
class ExtRational {
public:
    ExtRational() : inf_(false), v_(0) {}
    ExtRational(long num, long den) : inf_(false), v_(num, den) {
        require(den != 0, "ExtRational: zero denominator");
        v_.canonicalize();
    }
    explicit ExtRational(mpq_class v) : inf_(false), v_(std::move(v)) { v_.canonicalize(); }
    static ExtRational infinity() {
        ExtRational r;
        r.inf_ = true;
        return r;
    }

    bool is_infinite() const { return inf_; }
    const mpq_class& value() const {
        require(!inf_, "ExtRational: value() on infinity");
        return v_;
    }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }
    friend bool operator<(const ExtRational& a, const ExtRational& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return a < b || a == b; }
    friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
    friend bool operator>=(const ExtRational& a, const ExtRational& b) { return b <= a; }

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ExtRational(mpq_class(a.v_ + b.v_));
    }

    std::string str() const { return inf_ ? "inf" : v_.get_str(); }

private:
    bool inf_;
    mpq_class v_;
};

inline std::string rat_str(const mpq_class& q) { return q.get_str(); }

// "num/den" or "num"; den > 0 after canonicalization
mpq_class rat_parse(const std::string& s);

}  // namespace asnp
