#include "asnp/intutil.hpp"

#include "doctest.h"

using namespace asnp;

TEST_CASE("primality on small and structured inputs") {
    CHECK(is_prime64(2));
    CHECK(is_prime64(3));
    CHECK(is_prime64(23));
    CHECK(is_prime64(1ull << 61 ? 2305843009213693951ull : 0));  // 2^61 - 1
    CHECK_FALSE(is_prime64(1));
    CHECK_FALSE(is_prime64(561));    // Carmichael
    CHECK_FALSE(is_prime64(3215031751ull));  // strong pseudoprime to first four bases
    int primes_below_100 = 0;
    for (std::uint64_t n = 0; n < 100; ++n)
        if (is_prime64(n)) ++primes_below_100;
    CHECK(primes_below_100 == 25);
}

TEST_CASE("factorization recombines and is prime") {
    for (std::uint64_t n : {2ull, 12ull, 97ull, 1ull << 40, 600851475143ull,
                            (1ull << 40) - 1, 1000003ull * 1000033ull}) {
        auto f = factor64(n);
        std::uint64_t prod = 1;
        for (auto [p, e] : f) {
            CHECK(is_prime64(p));
            for (unsigned i = 0; i < e; ++i) prod *= p;
        }
        CHECK(prod == n);
    }
}

TEST_CASE("modular inverse") {
    for (std::uint64_t m : {2ull, 7ull, 23ull, 1000000007ull}) {
        for (std::uint64_t a = 1; a < 20; ++a) {
            if (a % m == 0) continue;
            CHECK(mulmod64(a, invmod64(a, m), m) == 1 % m);
        }
    }
}
