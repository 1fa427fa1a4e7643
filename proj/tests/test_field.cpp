#include "doctest.h"
#include "mnet/errors.hpp"
#include "mnet/field.hpp"

using mnet::PrimeField;

TEST_CASE("prime moduli are accepted, composites rejected") {
    for (uint32_t p : {2u, 3u, 5u, 7u, 11u, 101u, 65521u}) CHECK(PrimeField(p).p() == p);
    for (uint32_t n : {0u, 1u, 4u, 6u, 9u, 15u, 91u, 65536u})
        CHECK_THROWS_AS(PrimeField{n}, mnet::CompositeModulus);
}

TEST_CASE("is_prime agrees with trial division on small integers") {
    auto slow = [](uint32_t n) {
        if (n < 2) return false;
        for (uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    for (uint32_t n = 0; n < 2000; ++n) CHECK(PrimeField::is_prime(n) == slow(n));
}

TEST_CASE("field arithmetic satisfies the ring identities elementwise") {
    for (uint32_t p : {2u, 3u, 7u}) {
        PrimeField f(p);
        for (uint32_t a = 0; a < p; ++a) {
            CHECK(f.add(a, f.neg(a)) == 0);
            CHECK(f.sub(a, a) == 0);
            for (uint32_t b = 0; b < p; ++b) {
                CHECK(f.add(a, b) == (a + b) % p);
                CHECK(f.mul(a, b) == (a * b) % p);
                CHECK(f.sub(f.add(a, b), b) == a);
            }
        }
    }
}

TEST_CASE("every nonzero element has a multiplicative inverse") {
    for (uint32_t p : {2u, 3u, 5u, 13u, 101u}) {
        PrimeField f(p);
        for (uint32_t a = 1; a < p; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("pow matches repeated multiplication and Fermat's little theorem") {
    PrimeField f(13);
    for (uint32_t a = 0; a < 13; ++a) {
        uint32_t acc = 1;
        for (uint64_t e = 0; e < 30; ++e) {
            CHECK(f.pow(a, e) == acc);
            acc = f.mul(acc, a);
        }
        if (a != 0) CHECK(f.pow(a, 12) == 1);
    }
}
