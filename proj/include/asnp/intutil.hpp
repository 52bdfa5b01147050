#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace asnp {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// deterministic Miller-Rabin, valid for all 64-bit inputs
bool is_prime64(std::uint64_t n);

// prime -> exponent, via trial division then Pollard rho
std::map<std::uint64_t, unsigned> factor64(std::uint64_t n);

// inverse of a mod m, gcd(a, m) = 1
std::uint64_t invmod64(std::uint64_t a, std::uint64_t m);

// p^e, throws on 64-bit overflow
std::uint64_t checked_pow64(std::uint64_t p, unsigned e);

}  // namespace asnp
