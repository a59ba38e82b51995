#include "jacobi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

constexpr double kPi = std::numbers::pi;

void check_margin(double lambda, double margin) {
    // slack of a few ulps so grid endpoints written as 1 - margin are accepted
    if (!(std::abs(lambda) <= 1.0 - margin + 4e-16))
        throw ConfigError("lambda must satisfy |lambda| <= 1 - margin");
}

void unwind(std::vector<WeightPoint>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double jump = pts[i - 1].eta - pts[i].eta;
        pts[i].eta += 2.0 * kPi * std::round(jump / (2.0 * kPi));
    }
}

void require_hs(const CoefficientModel& model) {
    const auto k = model.kind();
    if (k != ModelKind::PowerLaw && k != ModelKind::Composite) return;
    if ((model.alpha() != 0.0 && model.r1() <= 0.5) || (model.b() != 0.0 && model.r2() <= 0.5))
        throw ConfigError("model is not Hilbert-Schmidt: need r > 1/2 for nonzero power-law terms");
}

WeightPoint weight_at(const CoefficientModel& model, double lambda, const SpectralOptions& opt,
                      const CoeffTable* table) {
    check_margin(lambda, opt.edge_margin);
    const JostValue jv = jost_value(model, SpectralPoint::plus(lambda), opt.jost, table);
    const cd om = jv.omega / jv.k_lambda;
    const double m2 = std::norm(om);
    if (!(m2 > 0.0)) throw NumericalError("weight: Omega vanished on the cut");
    WeightPoint wp;
    wp.lambda = lambda;
    wp.omega = om;
    wp.w = std::sqrt((1.0 - lambda) * (1.0 + lambda)) / (2.0 * kPi * m2);
    wp.kappa = 2.0 * std::abs(om);
    wp.eta = std::arg(-2.0 * om);
    return wp;
}

CoeffTable scan_table(const CoefficientModel& model, const SpectralOptions& opt) {
    return CoeffTable::build(model, choose_tail(model, opt.jost).N);
}

}  // namespace

WeightPoint weight(const CoefficientModel& model, double lambda, const SpectralOptions& opt) {
    return weight_at(model, lambda, opt, nullptr);
}

std::vector<WeightPoint> weight_scan(const CoefficientModel& model, const std::vector<double>& grid,
                                     const SpectralOptions& opt) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.size());
    std::vector<WeightPoint> out(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    if (grid.empty()) return out;
    const CoeffTable table = scan_table(model, opt);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = weight_at(model, grid[static_cast<std::size_t>(i)], opt, &table);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    // first failure in grid order, so the error does not depend on scheduling
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    unwind(out);
    return out;
}

std::vector<WeightPoint> weight_scan_serial(const CoefficientModel& model, const std::vector<double>& grid,
                                            const SpectralOptions& opt) {
    std::vector<WeightPoint> out;
    if (grid.empty()) return out;
    out.reserve(grid.size());
    const CoeffTable table = scan_table(model, opt);
    for (double x : grid) out.push_back(weight_at(model, x, opt, &table));
    unwind(out);
    return out;
}

double spectral_mass(const CoefficientModel& model, const SpectralOptions& opt, double h, bool parallel) {
    if (!(h > 0.0 && h < 0.25)) throw ConfigError("spectral_mass: h must lie in (0, 0.25)");
    if (opt.edge_margin > h) throw ConfigError("spectral_mass: edge margin larger than h");

    // breakpoints on [0, 1-h], refined geometrically toward the edge
    std::vector<double> right{1.0 - h};
    for (double d = 2.0 * h; d < 0.25; d *= 2.0) right.push_back(1.0 - d);
    for (double x = 0.75; x > 0.0; x -= 0.25) right.push_back(x);
    right.push_back(0.0);
    std::vector<double> bp;
    for (auto it = right.begin(); it != right.end(); ++it) bp.push_back(-*it);
    for (auto it = right.rbegin() + 1; it != right.rend(); ++it) bp.push_back(*it);
    std::sort(bp.begin(), bp.end());

    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& absc = Rule::abscissa();
    const auto& wts = Rule::weights();
    std::vector<double> nodes, weights;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const double c = 0.5 * (bp[k] + bp[k + 1]), r = 0.5 * (bp[k + 1] - bp[k]);
        for (std::size_t j = 0; j < absc.size(); ++j) {
            const double x = absc[j];
            if (x == 0.0) {
                nodes.push_back(c);
                weights.push_back(r * wts[j]);
            } else {
                nodes.push_back(c - r * x);
                weights.push_back(r * wts[j]);
                nodes.push_back(c + r * x);
                weights.push_back(r * wts[j]);
            }
        }
    }
    nodes.push_back(-(1.0 - h));
    nodes.push_back(1.0 - h);

    const std::vector<WeightPoint> w =
        parallel ? weight_scan(model, nodes, opt) : weight_scan_serial(model, nodes, opt);
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * w[i].w;

    // w ~ c sqrt(1 - lambda^2) on the strips [1-h, 1] and [-1, -1+h]
    const double x = 1.0 - h;
    const double env = std::sqrt((1.0 - x) * (1.0 + x));
    const double strip = kPi / 4.0 - 0.5 * (x * env + std::asin(x));
    sum += (w[w.size() - 2].w + w.back().w) / env * strip;
    return sum;
}

std::vector<double> phases(const CoefficientModel& model, double lambda, index_t N) {
    if (N < 0 || N > kHardCap) throw ConfigError("phases: N out of range");
    std::vector<double> phi(static_cast<std::size_t>(N) + 1);
    double s = 0.0, c = 0.0;
    for (index_t n = 0; n < N; ++n) {
        const Coeffs co = model.eval(n);
        const double th = clamped_arccos((lambda - co.b) / (2.0 * co.a));
        const double t = s + th;
        c += std::abs(s) >= th ? (s - t) + th : (th - t) + s;
        s = t;
        phi[static_cast<std::size_t>(n) + 1] = s + c;
    }
    return phi;
}

std::vector<double> predict_Pn_sequence(const CoefficientModel& model, double lambda, index_t N,
                                        const SpectralOptions& opt) {
    const WeightPoint wp = weight(model, lambda, opt);
    const std::vector<double> phi = phases(model, lambda, N);
    const double amp = wp.kappa / std::sqrt((1.0 - lambda) * (1.0 + lambda));
    std::vector<double> out(phi.size());
    for (std::size_t n = 0; n < phi.size(); ++n) out[n] = amp * std::sin(phi[n] + wp.eta);
    return out;
}

double predict_Pn(const CoefficientModel& model, double lambda, index_t n, const SpectralOptions& opt) {
    if (n < 0) throw ConfigError("predict_Pn: n must be >= 0");
    return predict_Pn_sequence(model, lambda, n, opt).back();
}

double reconstruct_Pn(const JostSolution& sol, index_t n) {
    const SpectralPoint& p = sol.point();
    if (!p.on_cut() || p.side != Side::Plus || !sol.normalized)
        throw ConfigError("reconstruct_Pn: needs a normalized solution at lambda + i0");
    const double lam = p.lambda();
    return 2.0 * std::imag(std::conj(sol.omega) * sol.f(n)) / std::sqrt((1.0 - lam) * (1.0 + lam));
}

cd reconstruct_Pn_pair(const JostSolution& sp, const JostSolution& sm, index_t n) {
    if (!sp.point().on_cut() || sp.point().side != Side::Plus || sm.point().side != Side::Minus ||
        sp.point().z != sm.point().z || !sp.normalized || !sm.normalized)
        throw ConfigError("reconstruct_Pn_pair: needs normalized solutions at lambda +- i0");
    const double lam = sp.point().lambda();
    return (sm.omega * sp.f(n) - sp.omega * sm.f(n)) / (cd(0.0, 1.0) * std::sqrt((1.0 - lam) * (1.0 + lam)));
}

EigenResult find_eigenvalues(const CoefficientModel& model, const EigenSearch& s, const JostOptions& jopt,
                             bool parallel) {
    if (!(s.delta >= 1e-3)) throw ConfigError("eigenvalue search: delta must be >= 1e-3");
    if (s.grid < 2) throw ConfigError("eigenvalue search: grid must have >= 2 points");
    const double R = s.R > 0.0 ? s.R : 2.0 + 2.0 * model.sup_perturbation();
    EigenResult res;
    if (!(R > 1.0 + s.delta)) return res;

    const index_t G = s.grid;
    // [-R, -1-delta] then [1+delta, R], both increasing
    std::vector<double> xs(static_cast<std::size_t>(2 * G));
    for (index_t i = 0; i < G; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(G - 1);
        xs[static_cast<std::size_t>(i)] = -R + t * (R - 1.0 - s.delta);
        xs[static_cast<std::size_t>(G + i)] = 1.0 + s.delta + t * (R - 1.0 - s.delta);
    }

    std::vector<double> fx(xs.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xs.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            fx[static_cast<std::size_t>(i)] = jost_real(model, xs[static_cast<std::size_t>(i)], jopt);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            fx[static_cast<std::size_t>(i)] = jost_real(model, xs[static_cast<std::size_t>(i)], jopt);
    }

    for (int side = 0; side < 2; ++side) {
        const std::size_t off = static_cast<std::size_t>(side * G);
        index_t last_change = -10;
        for (index_t i = 0; i + 1 < G; ++i) {
            const std::size_t k = off + static_cast<std::size_t>(i);
            double lo = xs[k], hi = xs[k + 1], flo = fx[k], fhi = fx[k + 1];
            if (flo == 0.0) {
                res.eigenvalues.push_back(lo);
                continue;
            }
            if ((flo < 0.0) == (fhi < 0.0) || fhi == 0.0) continue;
            if (i - last_change <= 2)
                res.warnings.push_back("sign changes closer than 2 grid steps near " + std::to_string(lo));
            last_change = i;
            while (hi - lo > s.xtol) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = jost_real(model, mid, jopt);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            res.eigenvalues.push_back(0.5 * (lo + hi));
        }
        const std::size_t last = off + static_cast<std::size_t>(G - 1);
        if (fx[last] == 0.0) res.eigenvalues.push_back(xs[last]);
    }
    std::sort(res.eigenvalues.begin(), res.eigenvalues.end());
    return res;
}

HsPhase hs_phase(const CoefficientModel& model, double lambda, index_t n) {
    require_hs(model);
    if (!(std::abs(lambda) < 1.0)) throw ConfigError("hs_phase: lambda must lie in (-1,1)");
    if (n < 1 || n > kHardCap) throw ConfigError("hs_phase: n out of range");
    const double theta = std::acos(lambda);
    const double c2 = 2.0 * std::cos(theta), st = std::sin(theta);
    // Neumaier sums for Phi_n = sum (theta_m - theta) and S_n
    double P = 0.0, Pc = 0.0, S = 0.0, Sc = 0.0, gamma_half = 0.0;
    auto add = [](double& s, double& c, double v) {
        const double t = s + v;
        c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    };
    const index_t half = n / 2;
    for (index_t m = 0; m < n; ++m) {
        if (m == half) gamma_half = (P + Pc) - (S + Sc) / st;
        const Coeffs co = model.eval(m);
        const Coeffs pt = model.perturbation(m);
        add(P, Pc, clamped_arccos((lambda - co.b) / (2.0 * co.a)) - theta);
        add(S, Sc, c2 * pt.a + pt.b);
    }
    HsPhase h;
    h.sum = S + Sc;
    h.gamma = (P + Pc) - h.sum / st;
    h.phase = static_cast<double>(n) * theta + h.sum / st + h.gamma;
    h.gamma_converged = std::abs(h.gamma - gamma_half) < 1e-8;
    return h;
}

HsLimit hs_complex_limit(const CoefficientModel& model, cd z, double tol, index_t n_max) {
    require_hs(model);
    const SpectralPoint p = SpectralPoint::off(z);
    p.validate();
    if (n_max < 16 || n_max > kHardCap) throw ConfigError("hs_complex_limit: n_max out of range");
    const JostValue jv = jost_value(model, p);
    if (std::abs(jv.omega) < 1e-9 * (1.0 + std::abs(z)))
        throw NumericalError("hs_complex_limit: z is (numerically) an eigenvalue");

    const cd root = sqrt_branch(z, Side::None);
    const cd zt = zeta(p);
    cd s = 1.0, prev_term{}, L{}, c = 1.0, c_half = 1.0;
    HsLimit res{c, 0, false, 0.0};
    index_t next_check = 8;
    for (index_t n = 0; n < n_max; ++n) {
        const Coeffs co = model.eval(n);
        const Coeffs pt = model.perturbation(n);
        const Local l = local_at(co, p);
        const cd s1 = l.zeta * ((z - co.b) * s - prev_term) / co.a;
        prev_term = co.a * l.zeta * s;
        s = s1;
        L += std::log(zt / l.zeta) + (2.0 * z * pt.a + pt.b) / root;
        c = s * std::exp(L);
        res.n_used = n + 1;
        if (n + 1 == next_check) {
            if (next_check > 8) {
                res.last_change = std::abs(c - c_half);
                if (res.last_change < tol) {
                    res.converged = true;
                    break;
                }
            }
            c_half = c;
            next_check *= 2;
        }
    }
    res.value = c;
    return res;
}

}  // namespace jacobi
