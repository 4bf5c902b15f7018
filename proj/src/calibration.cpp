#include <random>

#include "cdl/assumption_tests.hpp"

namespace cdl {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double rejection_rate(int trials, std::uint64_t seed, const std::function<bool(std::uint64_t)>& rejects) {
    if (trials < 1) throw std::invalid_argument("rejection_rate: trials must be positive");
    int count = 0;
#pragma omp parallel for reduction(+ : count) schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        if (rejects(trial_seed(seed, static_cast<std::uint64_t>(t)))) ++count;
    }
    return static_cast<double>(count) / trials;
}

double rejection_rate_serial(int trials, std::uint64_t seed,
                             const std::function<bool(std::uint64_t)>& rejects) {
    if (trials < 1) throw std::invalid_argument("rejection_rate: trials must be positive");
    int count = 0;
    for (int t = 0; t < trials; ++t) {
        if (rejects(trial_seed(seed, static_cast<std::uint64_t>(t)))) ++count;
    }
    return static_cast<double>(count) / trials;
}

}  // namespace cdl
