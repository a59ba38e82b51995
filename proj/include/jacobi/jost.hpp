#pragma once

#include <vector>

#include "jacobi/ansatz.hpp"

namespace jacobi {

/// How u is started at the tail index N.
///   Unit: u_N = u_{N+1} = 1, the plain truncation of the Volterra sum.
///   LiouvilleGreen: u_n = (sqrt(z^2-1) / d_n)^{1/2} exp(b_n / (2 d_n)) at n = N, N+1,
///   d_n = 2 a_n sqrt(z_n^2-1).  This is u_n to first order in the tail
///   perturbation, so the Omega error drops from O(eps_N) to O(eps_N^2).
enum class TailInit { Unit, LiouvilleGreen };

struct JostOptions {
    double tol = 1e-10;
    index_t n_max = 1'000'000;  // largest tail index the solver may use
    index_t n_out = 0;          // solution must be available up to this index
    TailInit tail = TailInit::LiouvilleGreen;
};

/// Tail index for (model, options): first n >= max(n_out, 1) whose tail
/// error estimate is below 0.1 tol, capped at n_max.  `converged` is false
/// when the cap was hit first.
struct TailChoice {
    index_t N;
    bool converged;
    double estimate;
};
TailChoice choose_tail(const CoefficientModel& model, const JostOptions& opt);

struct JostSolution {
    AnsatzProfile profile;      // z_n, zeta_n, r_n, q_n over 0..N+1
    std::vector<cd> u;          // u_n over 0..N+1
    cd f_minus1{};              // f_{-1}
    cd omega{};                 // -f_{-1}/2 (divided by k when normalized)
    double k_lambda = 1.0;
    bool normalized = false;
    double residual_estimate = 0.0;  // eps_N, bounds |u_N - 1| up to a constant
    double equation_residual = 0.0;  // a posteriori three-term residual
    bool tail_converged = true;

    index_t N() const { return profile.N; }
    const SpectralPoint& point() const { return profile.point; }
    double scale() const { return normalized ? k_lambda : 1.0; }
    cd u_at(index_t n) const { return u[static_cast<std::size_t>(n)]; }
    /// f_n for -1 <= n <= N+1.  Underflows to 0 for large n off the cut; use log_f there.
    cd f(index_t n) const;
    cd log_f(index_t n) const;
    /// f_n as mantissa and binary exponent, 0 <= n <= N+1.
    Scaled f_scaled(index_t n) const;
};

JostSolution solve_jost(const CoefficientModel& model, const SpectralPoint& p, const JostOptions& opt = {});

/// a_n, b_n and a_n - a_{n-1}, b_n - b_{n-1} for n = 0..N+1.  These do not
/// depend on z, so one table serves a whole grid of sweeps.
struct CoeffTable {
    index_t N = -1;
    std::vector<Coeffs> c, d;
    static CoeffTable build(const CoefficientModel& model, index_t N);
};

/// Jost function only, O(1) memory per point.  Same numbers as solve_jost(...).omega.
struct JostValue {
    cd omega;          // Omega(z), not normalized
    double k_lambda;   // 1 off the cut
    index_t N;
    bool tail_converged;
};
/// `table`, if given, must reach the tail index chosen for `opt`.
JostValue jost_value(const CoefficientModel& model, const SpectralPoint& p, const JostOptions& opt = {},
                     const CoeffTable* table = nullptr);

/// sum_{k <= k_max} u^(k) for the Volterra equation truncated at N (Unit tail).
std::vector<cd> iterate_neumann(const CoefficientModel& model, const SpectralPoint& p, index_t N, int k_max);

/// Kernel G_{n,m} evaluated from its definition; for small-index tests only.
cd kernel_G(const AnsatzProfile& prof, index_t n, index_t m);

/// Divides f and Omega by k(lambda).  Boundary points in (-1,1) only.
JostSolution normalize_on_cut(JostSolution sol);

/// Real-valued Jost function for real |lambda| > 1: f_{-1} of the decaying
/// real solution with positive normalization at the tail.  Zero exactly at
/// eigenvalues; its sign is continuous in lambda between them.
double jost_real(const CoefficientModel& model, double lambda, const JostOptions& opt = {});

}  // namespace jacobi
