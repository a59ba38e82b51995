#pragma once

#include <string>
#include <vector>

#include "jacobi/recurrence.hpp"

namespace jacobi {

struct SpectralOptions {
    JostOptions jost{};
    double edge_margin = 1e-3;
};

struct WeightPoint {
    double lambda;
    double w;      // (2 pi)^{-1} sqrt(1 - lambda^2) |Omega_bold|^{-2}
    double kappa;  // 2 |Omega_bold(lambda + i0)|
    double eta;    // arg(-2 Omega_bold(lambda + i0)), principal value
    cd omega;      // normalized Omega_bold(lambda + i0)
};

WeightPoint weight(const CoefficientModel& model, double lambda, const SpectralOptions& opt = {});

/// Weight on a grid.  eta is unwound continuously from its principal value
/// at the first point.  The parallel and serial versions return identical data.
std::vector<WeightPoint> weight_scan(const CoefficientModel& model, const std::vector<double>& grid,
                                     const SpectralOptions& opt = {});
std::vector<WeightPoint> weight_scan_serial(const CoefficientModel& model, const std::vector<double>& grid,
                                            const SpectralOptions& opt = {});

/// int w over (-1,1): composite Gauss-Legendre on [-1+h, 1-h] with panels
/// graded toward the edges, plus the sqrt(1-lambda^2) edge envelope on the
/// two remaining strips.
double spectral_mass(const CoefficientModel& model, const SpectralOptions& opt = {}, double h = 1e-3,
                     bool parallel = true);

/// phi_n(lambda) = sum_{m<n} theta_m for n = 0..N.
std::vector<double> phases(const CoefficientModel& model, double lambda, index_t N);

/// kappa (1-lambda^2)^{-1/2} sin(phi_n + eta).
double predict_Pn(const CoefficientModel& model, double lambda, index_t n, const SpectralOptions& opt = {});

/// Predictions for n = 0..N sharing one Jost solve.
std::vector<double> predict_Pn_sequence(const CoefficientModel& model, double lambda, index_t N,
                                        const SpectralOptions& opt = {});

/// 2 Im[conj(Omega_bold) f_bold_n] / sqrt(1 - lambda^2) from a normalized solution at lambda + i0.
double reconstruct_Pn(const JostSolution& sol_plus, index_t n);

/// The same expression assembled from separate lambda + i0 and lambda - i0 solves.
cd reconstruct_Pn_pair(const JostSolution& sol_plus, const JostSolution& sol_minus, index_t n);

struct EigenSearch {
    double delta = 1e-3;   // distance kept from +-1
    double R = 0.0;        // 0 -> 1 + 2 sup(|alpha_n| + |b_n|) + 1
    index_t grid = 400;    // points per half-line interval
    double xtol = 1e-12;
};

struct EigenResult {
    std::vector<double> eigenvalues;
    std::vector<std::string> warnings;
};

EigenResult find_eigenvalues(const CoefficientModel& model, const EigenSearch& s = {},
                             const JostOptions& jopt = {}, bool parallel = true);

struct HsPhase {
    double phase;        // n theta + (sin theta)^{-1} S_n + gamma_n  (= phi_n)
    double gamma;        // gamma_n = phi_n - n theta - (sin theta)^{-1} S_n
    double sum;          // S_n = sum_{m<n} (2 cos theta alpha_m + b_m)
    bool gamma_converged;
};

/// Requires sum (alpha_n^2 + b_n^2) < infinity.
HsPhase hs_phase(const CoefficientModel& model, double lambda, index_t n);

struct HsLimit {
    cd value;
    index_t n_used;
    bool converged;
    double last_change;  // |c_n - c_{n/2}| at the last checkpoint
};

/// lim zeta^n exp(S_n(z) / sqrt(z^2-1)) P_n(z), S_n(z) = sum_{m<n} (2 z alpha_m + b_m).
HsLimit hs_complex_limit(const CoefficientModel& model, cd z, double tol = 1e-10, index_t n_max = 1'000'000);

}  // namespace jacobi
