#pragma once

// Test-only oracles, written independently of the library implementation so
// comparisons are between two distinct codings.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Plain product-form theta, straight off the definition.
inline cplx theta_product(cplx z, cplx p, int terms) {
    cplx acc{1.0, 0.0};
    for (int j = 0; j <= terms; ++j) {
        cplx pj = std::pow(p, double(j));
        acc *= (1.0 - pj * z) * (1.0 - pj * p / z);
    }
    return acc;
}

// Doubled-truncation elliptic gamma, independent double loop.
inline cplx gamma_product(cplx z, cplx p, cplx q, int terms) {
    cplx acc{1.0, 0.0};
    for (int j = 0; j <= terms; ++j)
        for (int k = 0; k <= terms; ++k) {
            cplx t = std::pow(p, double(j)) * std::pow(q, double(k));
            acc *= (1.0 - p * q * t / z) / (1.0 - t * z);
        }
    return acc;
}

// Small deterministic generator for test points (independent of library Rng).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double unit() { return double(gen_() >> 11) * 0x1.0p-53; }
    cplx box() {
        return {0.9 * unit() - 0.45, 0.7 * unit() - 0.35};
    }
    cplx nonzero_box() {
        for (;;) {
            cplx z = box() + cplx{0.6, 0.0};
            if (std::abs(z) > 0.1) return z;
        }
    }
    std::vector<cplx> boxes(int n) {
        std::vector<cplx> out(n);
        for (auto& z : out) z = box();
        return out;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace oracle
