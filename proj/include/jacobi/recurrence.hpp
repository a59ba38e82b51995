#pragma once

#include <vector>

#include "jacobi/jost.hpp"

namespace jacobi {

/// P_n over -1..N, stored with offset: P[n + 1].
struct PolySequence {
    std::vector<cd> P;
    cd at(index_t n) const { return P[static_cast<std::size_t>(n + 1)]; }
    index_t N() const { return static_cast<index_t>(P.size()) - 2; }
};

/// Forward three-term recurrence.  Throws NumericalError on overflow.
PolySequence eval_poly(const CoefficientModel& model, cd z, index_t N);

/// s_n = q_n P_n for n = 0..N (no overflow off the cut).
std::vector<cd> scaled_poly(const CoefficientModel& model, const SpectralPoint& p, index_t N);

/// a_n (x_n y_{n+1} - x_{n+1} y_n)
inline cd wronskian(double a_n, cd xn, cd xn1, cd yn, cd yn1) { return a_n * (xn * yn1 - xn1 * yn); }

/// {P, f}(n) for n = -1..n_hi, evaluated in the q-scaled frame.
std::vector<cd> wronskian_Pf(const JostSolution& sol, index_t n_hi);

struct GrowingSolution {
    index_t n0 = 1;
    std::vector<cd> qg;   // q_n g_n for n = 0..N+1 (zero below n0)
    const JostSolution* sol = nullptr;

    cd qg_at(index_t n) const { return qg[static_cast<std::size_t>(n)]; }
    /// {f, g}(n) for n0 <= n <= N.
    cd wronskian_fg(index_t n) const;
};

/// g_n = f_n G_n with G_n = sum_{m=n0}^{n} (a_{m-1} f_{m-1} f_m)^{-1}.  The
/// returned object refers to `sol`, which must outlive it.
GrowingSolution growing_solution(const JostSolution& sol);

struct LimitResult {
    cd value;            // lim q_n P_n, or lim P_n / q_n at an eigenvalue
    cd jost_route;       // -Omega / sqrt(z^2-1), or {P, g} at an eigenvalue
    cd compensated{};    // value with the local first-order tail factor removed (off eigenvalues)
    bool eigenvalue = false;
    bool converged = false;
    index_t n_used = 0;
};

/// Evolves q_n P_n until |s_n - s_{n/2}| < tol at n = 16, 32, ...
LimitResult limit_qnPn(const CoefficientModel& model, cd z, double tol, index_t n_max = 1'000'000);

/// (R(z) e_n, e_m) = P_min f_max / Omega.  Off-cut z or a boundary point.
cd resolvent_entry(const CoefficientModel& model, const SpectralPoint& p, index_t n, index_t m,
                   const JostOptions& opt = {});

/// All entries with n, m <= size-1 from one Jost solve; row-major.
std::vector<cd> resolvent_block(const CoefficientModel& model, const SpectralPoint& p, index_t size,
                                const JostOptions& opt = {});

}  // namespace jacobi
