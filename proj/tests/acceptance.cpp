// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "jacobi/cli.hpp"
#include "jacobi/oracle.hpp"
#include "jacobi/spectral.hpp"

using namespace jacobi;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

CoefficientModel power_model() { return CoefficientModel::power_law(0.1, 0.7, 0.05, 0.7); }

std::vector<SpectralPoint> wronskian_points() {
    return {SpectralPoint::off({2.0, 0.0}),   SpectralPoint::off({-1.5, 0.0}),  SpectralPoint::off({1.5, 0.5}),
            SpectralPoint::off({0.3, 0.8}),   SpectralPoint::off({-0.7, -0.4}), SpectralPoint::off({0.2, -0.1}),
            SpectralPoint::plus(-0.9),        SpectralPoint::plus(-0.5),        SpectralPoint::plus(0.0),
            SpectralPoint::plus(0.5),         SpectralPoint::plus(0.9),         SpectralPoint::minus(0.3)};
}

// zeta^n by repeated squaring, about log2(n) roundings
Scaled scaled_pow(cd x, index_t n) {
    Scaled r, base;
    base *= x;
    for (; n > 0; n >>= 1) {
        if (n & 1) {
            r.m *= base.m;
            r.e += base.e;
            r.normalize();
        }
        base.m *= base.m;
        base.e *= 2;
        base.normalize();
    }
    return r;
}

double scaled_rel(const Scaled& x, const Scaled& y) {
    return std::abs(x.m * std::ldexp(1.0, static_cast<int>(x.e - y.e)) / y.m - 1.0);
}

Outcome c1_free_exact() {
    const double tol = 1e-12;
    const auto free = CoefficientModel::free();
    std::vector<SpectralPoint> pts{SpectralPoint::off({2.0, 0.0}), SpectralPoint::off({1.5, 0.0}),
                                   SpectralPoint::off({1.0, 1.0}), SpectralPoint::off({0.5, 0.5})};
    for (double l : {0.0, 0.5, -0.5, 0.9, -0.9}) pts.push_back(SpectralPoint::plus(l));
    JostOptions o;
    o.n_out = 10'000;
    o.n_max = 10'000;
    double worst = 0.0, worst_omega = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& p : pts) {
        const JostSolution s = solve_jost(free, p, o);
        const cd zt = zeta(p);
        for (index_t n = 0; n <= 10'000; ++n) worst = std::max(worst, scaled_rel(s.f_scaled(n), scaled_pow(zt, n)));
        const cd om0 = -1.0 / (2.0 * zeta(p));
        worst_omega = std::max(worst_omega, std::abs(s.omega - om0) / std::abs(om0));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < tol && worst_omega < tol && secs < 1.0,
            "max rel |f_n/zeta^n - 1| = " + fmt("%.2e", worst) + ", Omega_0 rel = " + fmt("%.2e", worst_omega) +
                " (tol 1e-12), " + fmt("%.3f", secs) + " s (limit 1 s)"};
}

Outcome c2_free_weight() {
    cli::RunConfig cfg;
    cfg.command = "weight-scan";
    cfg.model = {{"kind", "free"}};
    cfg.grid = cli::parse_grid("-0.999:0.999:101");
    cfg.format = "json";
    std::ostringstream out, err;
    if (cli::run(cfg, out, err) != 0) return {false, "weight-scan failed: " + err.str()};
    const auto j = nlohmann::json::parse(out.str());
    double worst = 0.0;
    for (const auto& row : j["rows"]) {
        const double l = row[0].get<double>(), w = row[1].get<double>();
        worst = std::max(worst, std::abs(w - (2.0 / kPi) * std::sqrt(1.0 - l * l)));
    }
    const double mass = j["mass"].get<double>();
    const bool ok = j["rows"].size() == 101 && worst < 1e-10 && std::abs(mass - 1.0) < 1e-6;
    return {ok, "max |w - (2/pi) sqrt(1-l^2)| = " + fmt("%.2e", worst) + " (tol 1e-10), |mass - 1| = " +
                    fmt("%.2e", std::abs(mass - 1.0)) + " (tol 1e-6)"};
}

Outcome c3_wronskian() {
    const auto m = power_model();
    JostOptions o;
    o.n_out = 10'000;
    double worst = 0.0;
    for (const auto& p : wronskian_points()) {
        const JostSolution s = solve_jost(m, p, o);
        const std::vector<cd> w = wronskian_Pf(s, 10'000);
        const cd w0 = w[1];  // n = 0
        for (std::size_t i = 1; i < w.size(); ++i) worst = std::max(worst, std::abs(w[i] - w0) / std::abs(w0));
    }
    return {worst < 1e-9, "max rel drift of {P,f}(n), n <= 1e4, 12 points = " + fmt("%.2e", worst) + " (tol 1e-9)"};
}

Outcome c4_reconstruction() {
    const std::vector<CoefficientModel> models{CoefficientModel::free(), CoefficientModel::explicit_list({}, {1.0}),
                                               power_model()};
    JostOptions o;
    o.n_out = 2000;
    o.n_max = 100'000;
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& m : models)
        for (double l : {0.9, -0.9, 0.5, -0.5, 0.0}) {
            const JostSolution s = normalize_on_cut(solve_jost(m, SpectralPoint::plus(l), o));
            const PolySequence P = eval_poly(m, {l, 0.0}, 2000);
            for (index_t n = 0; n <= 2000; ++n) {
                const double pn = P.at(n).real();
                worst = std::max(worst, std::abs(reconstruct_Pn(s, n) - pn) / std::max(1.0, std::abs(pn)));
            }
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst < 1e-8 && secs < 5.0, "max rel error n <= 2000 = " + fmt("%.2e", worst) + " (tol 1e-8), " +
                                            fmt("%.3f", secs) + " s (limit 5 s)"};
}

Outcome c5_offcut_limit() {
    const LimitResult r = limit_qnPn(power_model(), {2.0, 0.0}, 1e-12, 100'000);
    const double raw = std::abs(r.value - r.jost_route);
    const double comp = std::abs(r.compensated - r.jost_route);
    return {raw < 1e-6, "|q_n P_n + Omega/sqrt3| at n = " + std::to_string(r.n_used) + " is " + fmt("%.2e", raw) +
                            " (tol 1e-6); compensated sequence " + fmt("%.2e", comp)};
}

Outcome c6_growing() {
    JostOptions o;
    o.n_out = 10'000;
    double worst_lim = 0.0, worst_w = 0.0;
    std::string per;
    for (const auto& m : {CoefficientModel::free(), power_model()})
        for (cd z : {cd(2.0, 0.0), cd(1.5, 0.5)}) {
            const JostSolution s = solve_jost(m, SpectralPoint::off(z), o);
            const GrowingSolution g = growing_solution(s);
            const cd target = 1.0 / sqrt_branch(z, Side::None);
            const double e = std::abs(g.qg_at(10'000) - target);
            worst_lim = std::max(worst_lim, e);
            for (index_t n = g.n0; n <= s.N(); ++n) worst_w = std::max(worst_w, std::abs(g.wronskian_fg(n) - 1.0));
            per += (per.empty() ? "" : ", ") + fmt("%.1e", e);
        }
    return {worst_lim < 1e-6 && worst_w < 1e-10, "|q_n g_n - (z^2-1)^{-1/2}| at n = 1e4 [" + per + "] max " +
                                                     fmt("%.2e", worst_lim) + " (tol 1e-6); max |{f,g} - 1| = " +
                                                     fmt("%.2e", worst_w) + " (tol 1e-10)"};
}

Outcome c7_envelope() {
    const auto m = power_model();
    bool ok = true;
    std::string d;
    for (double l : {0.5, -0.3}) {
        const std::vector<double> pred = predict_Pn_sequence(m, l, 20'000);
        const PolySequence P = eval_poly(m, {l, 0.0}, 20'000);
        double prev = INFINITY;
        d += (d.empty() ? "" : "; ") + fmt("l=%.1f:", l);
        for (index_t N : {100, 1000, 10'000}) {
            double worst = 0.0;
            for (index_t n = N; n <= 2 * N; ++n)
                worst = std::max(worst, std::abs(P.at(n).real() - pred[static_cast<std::size_t>(n)]));
            ok = ok && worst < prev;
            prev = worst;
            d += fmt(" %.2e", worst);
        }
    }
    return {ok, "max_{[N,2N]} |P_n - prediction| for N = 1e2,1e3,1e4: " + d + " (must decrease)"};
}

Outcome c8_eigen() {
    const auto m = CoefficientModel::explicit_list({}, {2.0});
    const EigenResult er = find_eigenvalues(m);
    const std::vector<double> t1 = truncation_outside(m, 2000), t2 = truncation_outside(m, 4000);
    const std::size_t free_count = find_eigenvalues(CoefficientModel::free()).eigenvalues.size();
    if (er.eigenvalues.size() != 1 || t1.size() != 1 || t2.size() != 1)
        return {false, "eigenvalue counts: jost " + std::to_string(er.eigenvalues.size()) + ", trunc " +
                           std::to_string(t1.size()) + "/" + std::to_string(t2.size())};
    const double doubling = std::abs(t1[0] - t2[0]);
    const double diff = std::abs(er.eigenvalues[0] - t1[0]);
    return {diff < 1e-8 && doubling < 1e-12 && free_count == 0,
            "Omega root " + fmt("%.15f", er.eigenvalues[0]) + " vs truncation " + fmt("%.2e", diff) +
                " (tol 1e-8), doubling change " + fmt("%.1e", doubling) + ", free model roots " +
                std::to_string(free_count)};
}

Outcome c9_jump() {
    double worst = 0.0;
    for (const auto& m : {power_model(), CoefficientModel::explicit_list({}, {1.0})})
        for (double l : {0.0, 0.5, -0.5}) {
            const auto Rp = resolvent_block(m, SpectralPoint::plus(l), 5);
            const auto Rm = resolvent_block(m, SpectralPoint::minus(l), 5);
            const double w = weight(m, l).w;
            const PolySequence P = eval_poly(m, {l, 0.0}, 5);
            for (index_t n = 0; n < 5; ++n)
                for (index_t k = 0; k < 5; ++k) {
                    const std::size_t i = static_cast<std::size_t>(5 * n + k);
                    const cd jump = (Rp[i] - Rm[i]) / cd(0.0, 2.0 * kPi);
                    worst = std::max(worst, std::abs(jump - w * P.at(n).real() * P.at(k).real()));
                }
        }
    return {worst < 1e-8, "max |(2 pi i)^{-1} [R(l+i0) - R(l-i0)]_{nm} - w P_n P_m|, n,m <= 4 = " +
                              fmt("%.2e", worst) + " (tol 1e-8)"};
}

Outcome c10_neumann() {
    const auto m = power_model();
    const index_t N = 10'000;
    JostOptions o;
    o.tail = TailInit::Unit;
    o.n_out = N;
    o.n_max = N;
    double worst = 0.0;
    for (const auto& p : wronskian_points()) {
        const JostSolution s = solve_jost(m, p, o);
        const std::vector<cd> v = iterate_neumann(m, p, N, 30);
        for (index_t n = 0; n <= N + 1; ++n)
            worst = std::max(worst, std::abs(v[static_cast<std::size_t>(n)] - s.u_at(n)));
    }
    return {worst < 1e-10, "max |u_sweep - u_neumann(30)| at N = 1e4, 12 points = " + fmt("%.2e", worst) +
                               " (tol 1e-10)"};
}

Outcome c11_hs_phase() {
    const auto m = CoefficientModel::power_law(0.1, 1.0, 0.0, 1.0);
    const index_t n = 100'000;
    double worst = 0.0;
    for (double l : {0.5, -0.7, 0.2}) {
        const HsPhase h = hs_phase(m, l, n);
        const double c = std::cos(std::acos(l));
        const double v = h.sum - 0.2 * c * std::log(static_cast<double>(n));
        worst = std::max(worst, std::abs(v - 0.2 * c * std::numbers::egamma));
    }
    return {worst < 1e-4, "|S_n - 0.2 cos(theta) ln n - 0.2 cos(theta) gamma| at n = 1e5 = " + fmt("%.2e", worst) +
                              " (tol 1e-4)"};
}

Outcome c12_performance() {
    const auto m = power_model();
    SpectralOptions so;
    so.jost.n_max = 100'000;
    std::vector<double> grid;
    for (int i = 0; i < 500; ++i) grid.push_back(-0.995 + 1.99 * i / 499.0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = weight_scan(m, grid, so);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {w.size() == 500 && secs < 10.0, "500-point weight scan at n_max = 1e5: " + fmt("%.2f", secs) +
                                                " s (limit 10 s), streaming sweep"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"free-operator exactness", c1_free_exact},
        {"free weight and mass", c2_free_weight},
        {"Wronskian constancy", c3_wronskian},
        {"reconstruction oracle", c4_reconstruction},
        {"off-cut limit", c5_offcut_limit},
        {"growing solution", c6_growing},
        {"convergence envelope", c7_envelope},
        {"eigenvalue cross-validation", c8_eigen},
        {"spectral-derivative identity", c9_jump},
        {"solver cross-check", c10_neumann},
        {"HS phase", c11_hs_phase},
        {"performance", c12_performance},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
