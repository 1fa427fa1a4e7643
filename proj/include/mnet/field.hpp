#pragma once

#include <cstdint>

namespace mnet {

// Arithmetic in GF(p) for a prime modulus p.  All elements are canonical
// representatives in [0, p).  Only prime moduli are accepted: extension
// fields are out of scope, and a composite modulus would silently break
// every rank computation downstream, so the constructor rejects it.
class PrimeField {
  public:
    explicit PrimeField(uint32_t p);

    uint32_t p() const { return p_; }

    uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % p_; }
    uint32_t sub(uint32_t a, uint32_t b) const { return (a + p_ - b) % p_; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p_);
    }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    uint32_t inv(uint32_t a) const;  // a must be nonzero
    uint32_t pow(uint32_t a, uint64_t e) const;

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

    static bool is_prime(uint32_t n);

  private:
    uint32_t p_;
};

}  // namespace mnet
