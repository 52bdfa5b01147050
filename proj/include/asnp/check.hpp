#pragma once

#include <stdexcept>
#include <string>

namespace asnp {

// require: caller broke a precondition.  ensure: an internal invariant failed.
inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

inline void ensure(bool ok, const std::string& what) {
    if (!ok) throw std::logic_error(what);
}

}  // namespace asnp
