#pragma once

#include <cstdint>

#include "pgc/common.hpp"

namespace pgc {

// SplitMix64 stream; identical bit output on every platform
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();                      // [0,1), 53 bits
    double normal();                       // Box-Muller, one draw per call
    int uniform_int(int lo, int hi);       // inclusive
    cplx complex_normal();                 // real and imaginary parts N(0, 1/2)
    Mat gaussian(int rows, int cols);      // complex Ginibre
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t state_;
};

}  // namespace pgc
