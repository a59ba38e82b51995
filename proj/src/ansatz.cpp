#include "jacobi/ansatz.hpp"

#include <cmath>
#include <numbers>

#include "jacobi/errors.hpp"

namespace jacobi {

void SpectralPoint::validate() const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConfigError("spectral point not finite");
    if (side != Side::None && z.imag() != 0.0) throw ConfigError("boundary side given with Im z != 0");
    if (z.imag() == 0.0 && std::abs(std::abs(z.real()) - 1.0) == 0.0)
        throw ConfigError("z = +-1 is excluded");
    if (side == Side::None && z.imag() == 0.0 && std::abs(z.real()) < 1.0)
        throw ConfigError("real z inside (-1,1) needs a boundary side");
}

cd sqrt_branch(cd w, Side side) {
    if (w.imag() != 0.0) return std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
    const double x = w.real();
    const double t = std::sqrt(std::abs((x - 1.0) * (x + 1.0)));
    if (x > 1.0) return {t, 0.0};
    if (x < -1.0) return {-t, 0.0};
    return side == Side::Minus ? cd(0.0, -t) : cd(0.0, t);
}

cd branch_sqrt(const SpectralPoint& p) {
    p.validate();
    return sqrt_branch(p.z, p.side);
}

namespace {

cd zeta_from(cd w, cd s) {
    // on the cut zeta = conj(w + s) has unit modulus; elsewhere |w + s| >= 1
    if (w.imag() == 0.0 && s.real() == 0.0) return {w.real(), -s.imag()};
    return 1.0 / (w + s);
}

}  // namespace

cd zeta(const SpectralPoint& p) {
    const cd s = branch_sqrt(p);
    return zeta_from(p.z, s);
}

Local local_at(const Coeffs& c, const SpectralPoint& p) {
    Local l;
    l.z = (p.z - c.b) / (2.0 * c.a);
    l.s = sqrt_branch(l.z, p.side);
    l.zeta = zeta_from(l.z, l.s);
    l.zinv = l.z + l.s;
    return l;
}

cd remainder(const Coeffs& prev, const Coeffs& cur, const Coeffs& d, const Local& lprev,
             const Local& lcur, cd z) {
    if (d.a == 0.0 && d.b == 0.0) return {0.0, 0.0};
    const cd dz = ((z - cur.b) * d.a + cur.a * d.b) / (2.0 * prev.a * cur.a);  // z_{n-1} - z_n
    const cd ssum = lprev.s + lcur.s;
    cd delta;  // zeta_{n-1}^{-1} - zeta_n^{-1}
    if (std::abs(dz) < 1e-8 && std::abs(ssum) > 0.0)
        delta = dz * (1.0 + (lprev.z + lcur.z) / ssum);
    else
        delta = lprev.zinv - lcur.zinv;
    return -d.a * lprev.zinv + cur.a * delta;
}

void Scaled::normalize() {
    const double mag = std::max(std::abs(m.real()), std::abs(m.imag()));
    if (mag == 0.0 || !std::isfinite(mag)) return;
    int k = 0;
    std::frexp(mag, &k);
    if (k != 0) {
        m = cd(std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k));
        e += k;
    }
}

cd Scaled::value() const {
    if (e > 4000 || e < -4000) return m * std::pow(2.0, static_cast<double>(e));
    return cd(std::ldexp(m.real(), static_cast<int>(e)), std::ldexp(m.imag(), static_cast<int>(e)));
}

cd Scaled::log() const { return std::log(m) + static_cast<double>(e) * std::numbers::ln2; }

double clamped_arccos(double x) {
    if (x >= 1.0) return 0.0;
    if (x <= -1.0) return std::numbers::pi;
    return std::acos(x);
}

AnsatzProfile build_profile(const CoefficientModel& model, const SpectralPoint& p, index_t N) {
    p.validate();
    if (N < 1) throw ConfigError("build_profile: N must be >= 1");
    if (N > kHardCap) throw ConfigError("build_profile: N exceeds hard cap");

    AnsatzProfile prof;
    prof.point = p;
    prof.N = N;
    const std::size_t len = static_cast<std::size_t>(N) + 2;
    prof.coeffs.resize(len);
    prof.z_n.resize(len);
    prof.zeta_n.resize(len);
    prof.r_n.assign(len, cd{});
    prof.q.resize(len);
    prof.log_q.resize(len);

    const bool cut = p.on_cut();
    if (cut) {
        prof.theta_n.resize(len);
        prof.phi_n.resize(len);
        prof.Phi_n.resize(len);
    }
    const double theta = cut ? std::acos(p.lambda()) : 0.0;
    const double sgn = p.side == Side::Minus ? -1.0 : 1.0;

    Scaled q;
    cd logq{}, logq_c{};  // compensated sum
    double phi = 0.0, phi_c = 0.0, logk = 0.0;
    Local lprev{};
    for (std::size_t n = 0; n < len; ++n) {
        const index_t in = static_cast<index_t>(n);
        const Coeffs c = model.eval(in);
        const Local l = local_at(c, p);
        prof.coeffs[n] = c;
        prof.z_n[n] = l.z;
        prof.zeta_n[n] = l.zeta;
        if (n > 0) prof.r_n[n] = remainder(prof.coeffs[n - 1], c, model.diff(in), lprev, l, p.z);
        prof.q[n] = q;
        prof.log_q[n] = logq + logq_c;

        cd lz;
        if (cut) {
            const double th = clamped_arccos(l.z.real());
            prof.theta_n[n] = th;
            prof.phi_n[n] = phi + phi_c;
            prof.Phi_n[n] = prof.phi_n[n] - static_cast<double>(in) * theta;
            const double mod = std::abs(l.zeta);
            if (std::abs(l.z.real()) >= 1.0) logk += std::log(mod);
            lz = cd(std::log(mod), -sgn * th);
            const double t = phi + th;
            phi_c += std::abs(phi) >= th ? (phi - t) + th : (th - t) + phi;
            phi = t;
        } else {
            lz = std::log(l.zeta);
        }
        const cd t = logq + lz;
        logq_c += cd(std::abs(logq.real()) >= std::abs(lz.real()) ? (logq.real() - t.real()) + lz.real()
                                                                  : (lz.real() - t.real()) + logq.real(),
                     std::abs(logq.imag()) >= std::abs(lz.imag()) ? (logq.imag() - t.imag()) + lz.imag()
                                                                  : (lz.imag() - t.imag()) + logq.imag());
        logq = t;
        q *= l.zeta;
        lprev = l;
    }
    if (cut) {
        if (std::abs(prof.z_n[len - 1].real()) >= 1.0)
            throw NumericalError("build_profile: local lambda_N outside (-1,1); increase N");
        prof.k_lambda = std::exp(logk);
    }
    return prof;
}

}  // namespace jacobi
