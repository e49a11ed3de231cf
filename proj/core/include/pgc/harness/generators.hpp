#pragma once

#include <string>
#include <vector>

#include "pgc/harness/instance.hpp"

namespace pgc::harness {

struct GeneratorParams {
    int n = 3;
    double t = 0.5;
    std::uint64_t seed = 0;
};

// every family records its analytic ground truth under "expected"
InstanceSpec generate(const std::string& family, const GeneratorParams& p);
const std::vector<std::string>& generator_families();

// building blocks shared with the acceptance suite
Mat clock_matrix(int n);  // diag(omega^j)
Mat shift_matrix(int n);  // e_j -> e_{j+1}
InstanceSpec ad_unitary(int n);
InstanceSpec expectation_mix(double t, int n = 3);
InstanceSpec shift_conjugation(int n);
InstanceSpec scalars_in_full_expectation(int n);
InstanceSpec random_cpb(int n, std::uint64_t seed);
InstanceSpec shift_mixture(int n, double t);

}  // namespace pgc::harness
