#include "jacobi/recurrence.hpp"

#include <algorithm>
#include <cmath>

#include "jacobi/errors.hpp"

namespace jacobi {

PolySequence eval_poly(const CoefficientModel& model, cd z, index_t N) {
    if (N < 0) throw ConfigError("eval_poly: N must be >= 0");
    if (N > kHardCap) throw ConfigError("eval_poly: N exceeds hard cap");
    PolySequence ps;
    ps.P.resize(static_cast<std::size_t>(N) + 2);
    ps.P[0] = 0.0;
    ps.P[1] = 1.0;
    double a_prev = model.eval(-1).a;
    for (index_t n = 0; n < N; ++n) {
        const Coeffs c = model.eval(n);
        const std::size_t i = static_cast<std::size_t>(n) + 1;
        const cd next = ((z - c.b) * ps.P[i] - a_prev * ps.P[i - 1]) / c.a;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
            throw NumericalError("eval_poly: overflow, use scaled_poly");
        ps.P[i + 1] = next;
        a_prev = c.a;
    }
    return ps;
}

std::vector<cd> scaled_poly(const CoefficientModel& model, const SpectralPoint& p, index_t N) {
    p.validate();
    if (N < 0 || N > kHardCap) throw ConfigError("scaled_poly: N out of range");
    std::vector<cd> s(static_cast<std::size_t>(N) + 1);
    s[0] = 1.0;
    cd prev_term{};  // a_{n-1} zeta_{n-1} s_{n-1}
    for (index_t n = 0; n < N; ++n) {
        const Coeffs c = model.eval(n);
        const Local l = local_at(c, p);
        const std::size_t i = static_cast<std::size_t>(n);
        s[i + 1] = l.zeta * ((p.z - c.b) * s[i] - prev_term) / c.a;
        prev_term = c.a * l.zeta * s[i];
    }
    return s;
}

std::vector<cd> wronskian_Pf(const JostSolution& sol, index_t n_hi) {
    if (n_hi < -1 || n_hi > sol.N()) throw ConfigError("wronskian_Pf: index out of range");
    const auto& pr = sol.profile;
    const cd z = sol.point().z;
    std::vector<cd> w(static_cast<std::size_t>(n_hi) + 2);
    w[0] = sol.omega;
    cd s = 1.0, prev_term{};
    for (index_t n = 0; n <= n_hi; ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        const Coeffs c = pr.coeffs[i];
        const cd zt = pr.zeta_n[i];
        const cd s1 = zt * ((z - c.b) * s - prev_term) / c.a;
        w[i + 1] = c.a * (zt * s * sol.u[i + 1] - s1 * sol.u[i] / zt) / sol.scale();
        prev_term = c.a * zt * s;
        s = s1;
    }
    return w;
}

cd GrowingSolution::wronskian_fg(index_t n) const {
    const auto& pr = sol->profile;
    const std::size_t i = static_cast<std::size_t>(n);
    const cd zt = pr.zeta_n[i];
    return pr.coeffs[i].a * (sol->u[i] * qg[i + 1] / zt - zt * sol->u[i + 1] * qg[i]);
}

GrowingSolution growing_solution(const JostSolution& sol) {
    const SpectralPoint& p = sol.point();
    if (p.side != Side::None) throw ConfigError("growing_solution: z must be off [-1,1]");
    const index_t N = sol.N();
    const auto& pr = sol.profile;

    // smallest n0 <= 64 with |u_n| bounded away from zero on [n0-1, N]
    double umax = 0.0;
    for (const cd& v : sol.u) umax = std::max(umax, std::abs(v));
    std::vector<double> suffix_min(static_cast<std::size_t>(N) + 2);
    double m = std::abs(sol.u[static_cast<std::size_t>(N) + 1]);
    for (index_t n = N + 1; n >= 0; --n) {
        m = std::min(m, std::abs(sol.u[static_cast<std::size_t>(n)]));
        suffix_min[static_cast<std::size_t>(n)] = m;
    }
    index_t n0 = -1;
    for (index_t k = 1; k <= std::min<index_t>(64, N); ++k)
        if (suffix_min[static_cast<std::size_t>(k - 1)] > 1e-8 * umax) {
            n0 = k;
            break;
        }
    if (n0 < 0) throw NumericalError("growing_solution: no admissible n0 <= 64");

    GrowingSolution g;
    g.n0 = n0;
    g.sol = &sol;
    g.qg.assign(static_cast<std::size_t>(N) + 2, cd{});
    // Gh_n = q_n^2 G_n = zeta_{n-1}^2 Gh_{n-1} + zeta_{n-1} / (a_{n-1} u_{n-1} u_n)
    cd Gh{};
    for (index_t n = n0; n <= N + 1; ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        const cd zt = pr.zeta_n[i - 1];
        Gh = zt * zt * Gh + zt / (pr.coeffs[i - 1].a * sol.u[i - 1] * sol.u[i]);
        g.qg[i] = sol.u[i] * Gh;
    }
    return g;
}

LimitResult limit_qnPn(const CoefficientModel& model, cd z, double tol, index_t n_max) {
    const SpectralPoint p = SpectralPoint::off(z);
    p.validate();
    if (!(tol > 0.0)) throw ConfigError("limit_qnPn: tol must be positive");
    if (n_max < 16 || n_max > kHardCap) throw ConfigError("limit_qnPn: n_max out of range");

    JostOptions opt;
    const JostValue jv = jost_value(model, p, opt);
    const cd root = sqrt_branch(z, Side::None);
    LimitResult res;

    if (std::abs(jv.omega) < 1e-9 * (1.0 + std::abs(z))) {
        res.eigenvalue = true;
        // t_n = P_n / q_n tends to {P, g}, but forward evolution picks up the
        // growing solution at relative rate q_n^{-2}; take the flattest point
        // before that growth dominates.
        cd t = 1.0, prev_term{};
        cd best = t;
        double best_change = INFINITY;
        for (index_t n = 0; n < n_max; ++n) {
            const Coeffs c = model.eval(n);
            const Local l = local_at(c, p);
            const cd t1 = ((z - c.b) * t - prev_term) / (c.a * l.zeta);
            prev_term = c.a * t / l.zeta;
            res.n_used = n + 1;
            if (!std::isfinite(std::abs(t1))) break;
            const double change = std::abs(t1 - t) / std::abs(t1);
            t = t1;
            if (change < best_change) {
                best_change = change;
                best = t;
            } else if (change > 1e6 * best_change && change > 1e-3) {
                break;
            }
        }
        res.converged = best_change < tol;
        t = best;
        res.value = t;
        JostOptions o2;
        o2.n_out = 70;
        const JostSolution sol = solve_jost(model, p, o2);
        const GrowingSolution g = growing_solution(sol);
        // {P, g}(n) at n = n0 from P_n and g_n = q_n^{-1} (q_n g_n)
        const index_t n = g.n0;
        const PolySequence P = eval_poly(model, z, n + 1);
        const cd gn = g.qg_at(n) / sol.profile.q_value(n);
        const cd gn1 = g.qg_at(n + 1) / sol.profile.q_value(n + 1);
        res.jost_route = wronskian(sol.profile.coeffs[static_cast<std::size_t>(n)].a, P.at(n), P.at(n + 1), gn, gn1);
        return res;
    }

    res.jost_route = -jv.omega / root;
    cd s = 1.0, prev_term{}, s_half = 1.0;
    index_t next_check = 8;
    for (index_t n = 0; n < n_max; ++n) {
        const Coeffs c = model.eval(n);
        const Local l = local_at(c, p);
        const cd s1 = l.zeta * ((z - c.b) * s - prev_term) / c.a;
        prev_term = c.a * l.zeta * s;
        s = s1;
        res.n_used = n + 1;
        if (n + 1 == next_check) {
            // checkpoints are powers of two, so s_half is s_{n/2}
            if (next_check > 8 && std::abs(s - s_half) < tol) {
                res.converged = true;
                break;
            }
            s_half = s;
            next_check *= 2;
        }
    }
    res.value = s;
    // q_n g_n ~ 1 / (2 a_n s_n u_n) with u_n at its Liouville-Green value
    const Coeffs c = model.eval(res.n_used);
    const cd d = 2.0 * c.a * local_at(c, p).s;
    res.compensated = s * std::sqrt(d / root) * std::exp(0.5 * c.b / d);
    return res;
}

std::vector<cd> resolvent_block(const CoefficientModel& model, const SpectralPoint& p, index_t size,
                                const JostOptions& opt) {
    if (size < 1) throw ConfigError("resolvent_block: size must be >= 1");
    p.validate();
    JostOptions o = opt;
    o.n_out = std::max(o.n_out, size);
    if (o.n_max < o.n_out) o.n_max = o.n_out;
    const JostSolution sol = solve_jost(model, p, o);
    if (std::abs(sol.omega) < 1e-9 * (1.0 + std::abs(p.z)))
        throw NumericalError("resolvent: z is (numerically) an eigenvalue");
    const PolySequence P = eval_poly(model, p.z, size);
    std::vector<cd> R(static_cast<std::size_t>(size * size));
    for (index_t n = 0; n < size; ++n)
        for (index_t m = 0; m < size; ++m) {
            const index_t lo = std::min(n, m), hi = std::max(n, m);
            R[static_cast<std::size_t>(n * size + m)] = P.at(lo) * sol.f(hi) / sol.omega;
        }
    return R;
}

cd resolvent_entry(const CoefficientModel& model, const SpectralPoint& p, index_t n, index_t m,
                   const JostOptions& opt) {
    if (n < 0 || m < 0) throw ConfigError("resolvent_entry: indices must be >= 0");
    const index_t size = std::max(n, m) + 1;
    return resolvent_block(model, p, size, opt)[static_cast<std::size_t>(n * size + m)];
}

}  // namespace jacobi
