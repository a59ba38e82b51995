#pragma once

#include <complex>
#include <vector>

#include "jacobi/coefficients.hpp"

namespace jacobi {

using cd = std::complex<double>;

enum class Side { None, Plus, Minus };

/// A point z off [-1,1], or lambda +- i0 on the real axis.
///
/// Side::None with real z is accepted for |z| > 1.  If a local value z_n of
/// such a point lands in [-1,1] it is evaluated as z_n + i0.
struct SpectralPoint {
    cd z;
    Side side = Side::None;

    static SpectralPoint off(cd z) { return {z, Side::None}; }
    static SpectralPoint plus(double lambda) { return {cd(lambda, 0.0), Side::Plus}; }
    static SpectralPoint minus(double lambda) { return {cd(lambda, 0.0), Side::Minus}; }

    bool on_cut() const { return side != Side::None && std::abs(z.real()) < 1.0; }
    double lambda() const { return z.real(); }
    void validate() const;
};

/// sqrt(w^2 - 1) for a local value w.  Real w in [-1,1] uses the side;
/// Side::None is treated as Plus there.
cd sqrt_branch(cd w, Side side);

/// sqrt(z^2 - 1): positive for z > 1, negative for z < -1, +-i sqrt(1-lambda^2) on the cut.
cd branch_sqrt(const SpectralPoint& p);

/// zeta(z) = z - sqrt(z^2 - 1), |zeta| <= 1.
cd zeta(const SpectralPoint& p);

/// Local quantities at one index.
struct Local {
    cd z;     // z_n = (z - b_n) / (2 a_n)
    cd s;     // sqrt(z_n^2 - 1)
    cd zeta;  // zeta(z_n)
    cd zinv;  // 1 / zeta(z_n) = z_n + s
};

Local local_at(const Coeffs& c, const SpectralPoint& p);

/// r_n = a_{n-1} zeta_{n-1}^{-1} - a_n zeta_n^{-1} in difference form.
/// d = (a_n - a_{n-1}, b_n - b_{n-1}).
cd remainder(const Coeffs& prev, const Coeffs& cur, const Coeffs& d, const Local& lprev,
             const Local& lcur, cd z);

/// Complex number m * 2^e, kept with |m| in [0.5, 1) to avoid underflow.
struct Scaled {
    cd m{1.0, 0.0};
    index_t e = 0;

    void normalize();
    Scaled& operator*=(cd x) {
        m *= x;
        normalize();
        return *this;
    }
    cd value() const;
    cd log() const;
};

struct AnsatzProfile {
    SpectralPoint point;
    index_t N = 0;                // arrays cover 0..N+1
    std::vector<Coeffs> coeffs;
    std::vector<cd> z_n, zeta_n, r_n;
    std::vector<Scaled> q;        // q_n
    std::vector<cd> log_q;        // log q_n, phase unwound
    // boundary points only
    std::vector<double> theta_n, phi_n, Phi_n;
    double k_lambda = 1.0;

    cd q_value(index_t n) const { return q[static_cast<std::size_t>(n)].value(); }
};

AnsatzProfile build_profile(const CoefficientModel& model, const SpectralPoint& p, index_t N);

/// theta(lambda_n) with the endpoint clamp.
double clamped_arccos(double x);

}  // namespace jacobi
