#include "mnet/field.hpp"

#include "mnet/errors.hpp"

namespace mnet {

bool PrimeField::is_prime(uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (uint32_t d = 3; static_cast<uint64_t>(d) * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(uint32_t p) : p_(p) {
    if (!is_prime(p))
        throw CompositeModulus("field modulus " + std::to_string(p) + " is not prime");
}

uint32_t PrimeField::pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1 % p_;
    uint32_t base = a % p_;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

uint32_t PrimeField::inv(uint32_t a) const {
    if (a % p_ == 0) throw DimensionMismatch("inverse of zero in GF(" + std::to_string(p_) + ")");
    // Fermat: a^(p-2) = a^-1 for prime p.  p is small, so this is plenty fast.
    return pow(a, p_ - 2);
}

}  // namespace mnet
