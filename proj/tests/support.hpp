#pragma once

#include <random>
#include <vector>

#include "jacobi/coefficients.hpp"

namespace testsupport {

// Random long-range models with a_n bounded away from 0 and small sup perturbation.
inline jacobi::CoefficientModel random_model(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-0.12, 0.12), rate(0.55, 1.0), coin(0.0, 1.0);
    const double r1 = rate(rng), r2 = rate(rng);
    if (coin(rng) < 0.5) return jacobi::CoefficientModel::power_law(amp(rng), r1, amp(rng), r2);
    std::uniform_int_distribution<int> len(1, 6);
    std::vector<double> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
    for (double& x : a) x = 0.5 + amp(rng);
    for (double& x : b) x = amp(rng);
    return jacobi::CoefficientModel::composite(amp(rng), r1, amp(rng), r2, a, b);
}

inline jacobi::CoefficientModel reference_power() { return jacobi::CoefficientModel::power_law(0.1, 0.7, 0.05, 0.7); }

}  // namespace testsupport
