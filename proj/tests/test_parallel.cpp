#include <doctest.h>

#include <random>

#include "jacobi/oracle.hpp"
#include "jacobi/spectral.hpp"
#include "support.hpp"

using namespace jacobi;

// The OpenMP kernels must reproduce the serial reference bit for bit.

TEST_CASE("weight scan: parallel equals serial") {
    std::mt19937_64 rng(41);
    std::vector<double> grid;
    for (int i = 0; i < 97; ++i) grid.push_back(-0.98 + 1.96 * i / 96.0);
    SpectralOptions so;
    so.jost.n_max = 30'000;
    for (int trial = 0; trial < 4; ++trial) {
        const auto m = testsupport::random_model(rng);
        const auto a = weight_scan(m, grid, so), b = weight_scan_serial(m, grid, so);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].w == b[i].w);
            CHECK(a[i].eta == b[i].eta);
            CHECK(a[i].omega == b[i].omega);
        }
        CHECK(spectral_mass(m, so, 1e-3, true) == spectral_mass(m, so, 1e-3, false));
    }
}

TEST_CASE("truncation spectrum: parallel equals serial") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 4; ++trial) {
        const auto m = testsupport::random_model(rng);
        const TruncationOracle a = truncation_spectrum(m, 400, true), b = truncation_spectrum(m, 400, false);
        CHECK(a.eigenvalues == b.eigenvalues);
        CHECK(a.weights == b.weights);
    }
}

TEST_CASE("eigenvalue search: parallel equals serial") {
    const auto m = CoefficientModel::explicit_list({0.9, 0.2, 0.8}, {0.4});
    const auto a = find_eigenvalues(m, {}, {}, true), b = find_eigenvalues(m, {}, {}, false);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.warnings == b.warnings);
}
