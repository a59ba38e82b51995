#include "jacobi/jost.hpp"

#include <algorithm>
#include <cmath>

#include "jacobi/errors.hpp"

namespace jacobi {

TailChoice choose_tail(const CoefficientModel& model, const JostOptions& opt) {
    if (!(opt.tol > 0.0)) throw ConfigError("tol must be positive");
    if (opt.n_max < 1 || opt.n_max > kHardCap) throw ConfigError("n_max must lie in [1, 1e7]");
    if (opt.n_out < 0 || opt.n_out > opt.n_max) throw ConfigError("n_out must lie in [0, n_max]");
    const index_t lo = std::max<index_t>(opt.n_out, 1);
    if (const auto L = model.free_from()) return {std::max(lo, *L + 1), true, 0.0};

    // The Liouville-Green start leaves an error quadratic in the tail variation.
    const double target = 0.1 * opt.tol;
    const bool lg = opt.tail == TailInit::LiouvilleGreen;
    const auto n = first_index_below(model, lg ? std::sqrt(target) : target, lo, opt.n_max);
    auto metric = [&](index_t k) {
        const double e = model.eps(k);
        return lg ? e * e : e;
    };
    if (n) return {*n, true, metric(*n)};
    return {opt.n_max, false, metric(opt.n_max)};
}

namespace {

struct SweepEnd {
    cd u0, u1;
    Coeffs c0;
    cd zeta0;
    double logk = 0.0;
};

// Backward sweep T_n = zeta_n^2 (T_{n+1} + r_{n+1} u_{n+1}), u_n = u_{n+1} - T_n / (a_n zeta_n).
// Local quantities are recomputed on the way down so nothing of size N is kept
// unless `u` is given.
SweepEnd sweep(const CoefficientModel& model, const SpectralPoint& p, index_t N, TailInit tail, cd* u,
               const CoeffTable* table = nullptr) {
    if (table && table->N < N) throw ConfigError("coefficient table shorter than the tail index");
    auto coeff = [&](index_t n) { return table ? table->c[static_cast<std::size_t>(n)] : model.eval(n); };
    auto diff = [&](index_t n) { return table ? table->d[static_cast<std::size_t>(n)] : model.diff(n); };
    const bool cut = p.on_cut();
    Coeffs cn1 = coeff(N + 1);
    Local ln1 = local_at(cn1, p);
    Coeffs cn = coeff(N);
    Local ln = local_at(cn, p);
    if (cut && (std::abs(ln.z.real()) >= 1.0 || std::abs(ln1.z.real()) >= 1.0))
        throw NumericalError("tail index too small: local lambda_N outside (-1,1)");

    cd uN1{1.0, 0.0}, uN{1.0, 0.0};
    if (tail == TailInit::LiouvilleGreen && !model.free_from()) {
        const cd s = sqrt_branch(p.z, p.side);
        auto amp = [&](const Coeffs& c, const Local& l) {
            const cd d = 2.0 * c.a * l.s;
            return std::abs(d) > 1e-3 * std::abs(s) ? std::sqrt(s / d) * std::exp(0.5 * c.b / d) : cd{1.0, 0.0};
        };
        uN1 = amp(cn1, ln1);
        uN = amp(cn, ln);
    }

    double logk = 0.0;
    auto add_k = [&](const Local& l) {
        if (cut && std::abs(l.z.real()) >= 1.0) logk += std::log(std::abs(l.zeta));
    };
    add_k(ln1);
    add_k(ln);

    cd T = cn.a * ln.zeta * (uN1 - uN);
    if (u) {
        u[N + 1] = uN1;
        u[N] = uN;
    }
    cd unext = uN, ucur = uN, uafter = uN1;
    Coeffs cnext = cn;
    Local lnext = ln;
    for (index_t n = N - 1; n >= 0; --n) {
        const Coeffs c = coeff(n);
        const Local l = local_at(c, p);
        const cd r = remainder(c, cnext, diff(n + 1), l, lnext, p.z);
        T = l.zeta * l.zeta * (T + r * unext);
        ucur = unext - T / (c.a * l.zeta);
        if (u) u[n] = ucur;
        add_k(l);
        uafter = unext;
        unext = ucur;
        cnext = c;
        lnext = l;
    }
    return {ucur, uafter, cnext, lnext.zeta, logk};
}

cd omega_from(const SweepEnd& e, cd z) {
    // recurrence at n = 0 with a_{-1} = 1/2: f_{-1} = -2((b_0 - z) f_0 + a_0 f_1)
    return (e.c0.b - z) * e.u0 + e.c0.a * e.zeta0 * e.u1;
}

}  // namespace

namespace {
void check_index(const JostSolution& s, index_t n, index_t lo) {
    if (n < lo || n > s.N() + 1) throw ConfigError("Jost solution index outside the solved range");
}
}  // namespace

cd JostSolution::f(index_t n) const {
    check_index(*this, n, -1);
    if (n == -1) return f_minus1 / scale();
    return profile.q_value(n) * u_at(n) / scale();
}

cd JostSolution::log_f(index_t n) const {
    check_index(*this, n, -1);
    if (n == -1) return std::log(f_minus1 / scale());
    return profile.q[static_cast<std::size_t>(n)].log() + std::log(u_at(n)) - std::log(scale());
}

Scaled JostSolution::f_scaled(index_t n) const {
    check_index(*this, n, 0);
    Scaled v = profile.q[static_cast<std::size_t>(n)];
    v *= u_at(n) / scale();
    return v;
}

JostSolution solve_jost(const CoefficientModel& model, const SpectralPoint& p, const JostOptions& opt) {
    p.validate();
    const TailChoice tc = choose_tail(model, opt);
    const index_t N = tc.N;

    JostSolution sol;
    sol.profile = build_profile(model, p, N);
    sol.u.resize(static_cast<std::size_t>(N) + 2);
    const SweepEnd e = sweep(model, p, N, opt.tail, sol.u.data());
    sol.omega = omega_from(e, p.z);
    sol.f_minus1 = -2.0 * sol.omega;
    sol.k_lambda = sol.profile.k_lambda;
    sol.tail_converged = tc.converged;
    sol.residual_estimate = model.eps(N);

    // a posteriori check of the three-term equation, divided by q_n
    const auto& pr = sol.profile;
    double worst = 0.0;
    for (index_t n = 1; n < N; ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        const cd t1 = pr.coeffs[i - 1].a * sol.u[i - 1] / pr.zeta_n[i - 1];
        const cd t2 = (pr.coeffs[i].b - p.z) * sol.u[i];
        const cd t3 = pr.coeffs[i].a * pr.zeta_n[i] * sol.u[i + 1];
        const double den = std::abs(t1) + std::abs(t2) + std::abs(t3);
        if (den > 0.0) worst = std::max(worst, std::abs(t1 + t2 + t3) / den);
    }
    sol.equation_residual = worst;
    if (!(worst < 1e-10)) throw NumericalError("Jost solution fails the three-term equation check");
    return sol;
}

CoeffTable CoeffTable::build(const CoefficientModel& model, index_t N) {
    if (N < 0 || N >= kHardCap) throw ConfigError("coefficient table size out of range");
    CoeffTable t;
    t.N = N;
    t.c.resize(static_cast<std::size_t>(N) + 2);
    t.d.resize(static_cast<std::size_t>(N) + 2);
    for (index_t n = 0; n <= N + 1; ++n) {
        t.c[static_cast<std::size_t>(n)] = model.eval(n);
        t.d[static_cast<std::size_t>(n)] = model.diff(n);
    }
    return t;
}

JostValue jost_value(const CoefficientModel& model, const SpectralPoint& p, const JostOptions& opt,
                     const CoeffTable* table) {
    p.validate();
    const TailChoice tc = choose_tail(model, opt);
    const SweepEnd e = sweep(model, p, tc.N, opt.tail, nullptr, table);
    return {omega_from(e, p.z), std::exp(e.logk), tc.N, tc.converged};
}

std::vector<cd> iterate_neumann(const CoefficientModel& model, const SpectralPoint& p, index_t N, int k_max) {
    if (k_max < 1) throw ConfigError("k_max must be >= 1");
    const AnsatzProfile prof = build_profile(model, p, N);
    const std::size_t len = static_cast<std::size_t>(N) + 2;
    std::vector<cd> total(len, cd{1.0, 0.0}), term(len, cd{1.0, 0.0}), next(len);

    double prev_norm = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        // next = -K term, K v_n = sum_{m=n+1}^{N} G_{n,m} r_m v_m
        cd S{}, Kv{};
        next[N + 1] = next[N] = cd{};
        for (index_t n = N - 1; n >= 0; --n) {
            const std::size_t i = static_cast<std::size_t>(n);
            const cd zt = prof.zeta_n[i];
            S = zt * zt * (S + prof.r_n[i + 1] * term[i + 1]);
            Kv += S / (prof.coeffs[i].a * zt);
            next[i] = -Kv;
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            total[i] += next[i];
            norm = std::max(norm, std::abs(next[i]));
        }
        if (k > k_max / 2 && norm > prev_norm && norm > 1e-14)
            throw NumericalError("Neumann terms stopped decreasing");
        prev_norm = norm;
        term.swap(next);
        if (norm == 0.0) break;
    }
    return total;
}

cd kernel_G(const AnsatzProfile& prof, index_t n, index_t m) {
    if (n < 0 || m <= n || m > prof.N + 1) throw ConfigError("kernel_G: need 0 <= n < m <= N+1");
    cd sum{};
    const cd qm = prof.q_value(m);
    for (index_t p = n; p < m; ++p) {
        const std::size_t i = static_cast<std::size_t>(p);
        const cd qp = prof.q_value(p);
        sum += 1.0 / (prof.coeffs[i].a * prof.zeta_n[i] * qp * qp);
    }
    return qm * qm * sum;
}

JostSolution normalize_on_cut(JostSolution sol) {
    if (!sol.point().on_cut()) throw ConfigError("normalize_on_cut: not a boundary point in (-1,1)");
    if (sol.normalized) return sol;
    sol.normalized = true;
    sol.omega /= sol.k_lambda;
    return sol;
}

double jost_real(const CoefficientModel& model, double lambda, const JostOptions& opt) {
    if (!(std::abs(lambda) > 1.0)) throw ConfigError("jost_real: need |lambda| > 1");
    if (opt.n_max < 1 || opt.n_max > kHardCap) throw ConfigError("n_max must lie in [1, 1e7]");
    const SpectralPoint p = SpectralPoint::off(cd(lambda, 0.0));

    // Backward recurrence converges to the decaying solution from any start;
    // the start error is damped by |q_N|^2, so stop once that is below 1e-20.
    const index_t lo = std::max<index_t>(1, model.free_from().value_or(0) + 1);
    double logq = 0.0;
    index_t N = opt.n_max;
    for (index_t n = 0; n < opt.n_max; ++n) {
        logq += std::log(std::abs(local_at(model.eval(n), p).zeta));
        if (n + 1 >= lo && 2.0 * logq < -46.0) {
            N = n + 1;
            break;
        }
    }
    const Local lN = local_at(model.eval(N), p);
    // f_N carries the sign of q_N so the result does not flip with the parity of N.
    const double f_start = (lambda < 0.0 && N % 2 == 1) ? -1.0 : 1.0;
    double fn1 = f_start * lN.zeta.real(), fn = f_start;
    for (index_t n = N; n >= 0; --n) {
        const Coeffs c = model.eval(n);
        const double fm = ((lambda - c.b) * fn - c.a * fn1) / model.eval(n - 1).a;
        fn1 = fn;
        fn = fm;
        const double big = std::max(std::abs(fn), std::abs(fn1));
        if (big > 1e150) {
            fn = std::ldexp(fn, -500);
            fn1 = std::ldexp(fn1, -500);
        }
    }
    // fn = f_{-1}, fn1 = f_0
    const double d = std::abs(fn1) > 0.0 ? std::abs(fn1) : 1.0;
    return fn / d;
}

}  // namespace jacobi
