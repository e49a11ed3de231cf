#include "pgc/rng.hpp"

#include <cmath>
#include <numbers>

namespace pgc {

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next_u64() % span);
}

cplx Rng::complex_normal() {
    double re = normal();
    double im = normal();
    return {re * std::sqrt(0.5), im * std::sqrt(0.5)};
}

Mat Rng::gaussian(int rows, int cols) {
    Mat g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = complex_normal();
    return g;
}

Rng Rng::split(std::uint64_t stream) const {
    Rng child(state_ ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    child.next_u64();
    return child;
}

}  // namespace pgc
