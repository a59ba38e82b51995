#include "jacobi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "jacobi/errors.hpp"

namespace jacobi {

TruncationOracle truncation_matrix(const CoefficientModel& model, index_t N) {
    if (N < 2) throw ConfigError("truncation: N must be >= 2");
    if (N > 200'000) throw ConfigError("truncation: N too large for the oracle");
    TruncationOracle t;
    t.N = N;
    t.a.resize(static_cast<std::size_t>(N) - 1);
    t.b.resize(static_cast<std::size_t>(N));
    for (index_t n = 0; n < N; ++n) {
        const Coeffs c = model.eval(n);
        t.b[static_cast<std::size_t>(n)] = c.b;
        if (n + 1 < N) t.a[static_cast<std::size_t>(n)] = c.a;
    }
    return t;
}

index_t sturm_count(const TruncationOracle& t, double x) {
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    index_t count = 0;
    double d = t.b[0] - x;
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < t.b.size(); ++i) {
        d = (t.b[i] - x) - t.a[i - 1] * t.a[i - 1] / d;
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

namespace {

void gershgorin(const TruncationOracle& t, double& lo, double& hi) {
    lo = std::numeric_limits<double>::max();
    hi = -lo;
    const std::size_t n = t.b.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? t.a[i - 1] : 0.0) + (i + 1 < n ? t.a[i] : 0.0);
        lo = std::min(lo, t.b[i] - r);
        hi = std::max(hi, t.b[i] + r);
    }
    const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    lo -= pad;
    hi += pad;
}

double bisect(const TruncationOracle& t, index_t k, double lo, double hi) {
    // invariant: count(lo) <= k < count(hi)
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// (T - mu) x = rhs with partial pivoting (LAPACK gtsv layout); rhs overwritten by x
void tridiag_solve(const TruncationOracle& t, double mu, std::vector<double>& x) {
    const std::size_t n = t.b.size();
    std::vector<double> dl(t.a), d(n), du(t.a), du2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.b[i] - mu;
    const double tiny = std::numeric_limits<double>::epsilon() * 1e-3;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            x[i + 1] -= f * x[i];
            dl[i] = 0.0;
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            std::swap(x[i], x[i + 1]);
            x[i + 1] -= f * x[i];
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    x[n - 1] /= d[n - 1];
    if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    // an isolated eigenvector can span more than the double range; only the
    // direction matters, so rescale the part already computed when it grows
    for (std::size_t i = n - 2; i-- > 0;) {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        if (std::abs(x[i]) > 1e150)
            for (std::size_t k = i; k < n; ++k) x[k] *= 1e-150;
    }
}

}  // namespace

double sturm_eigenvalue(const TruncationOracle& t, index_t k) {
    if (k < 0 || k >= t.N) throw ConfigError("sturm_eigenvalue: index out of range");
    double lo, hi;
    gershgorin(t, lo, hi);
    return bisect(t, k, lo, hi);
}

double e0_weight(const TruncationOracle& t, double mu) {
    const std::size_t n = t.b.size();
    std::vector<double> x(n, 1.0);
    for (int it = 0; it < 3; ++it) {
        tridiag_solve(t, mu, x);
        if (!std::isfinite(x[0])) throw NumericalError("inverse iteration overflowed");
        double nrm = 0.0;
        for (double v : x) nrm = std::max(nrm, std::abs(v));
        for (double& v : x) v /= nrm;
    }
    double s = 0.0;
    for (double v : x) s += v * v;
    return x[0] * x[0] / s;
}

TruncationOracle truncation_spectrum(const CoefficientModel& model, index_t N, bool parallel) {
    TruncationOracle t = truncation_matrix(model, N);
    t.eigenvalues.resize(static_cast<std::size_t>(N));
    t.weights.resize(static_cast<std::size_t>(N));
    double lo, hi;
    gershgorin(t, lo, hi);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const double ev = bisect(t, static_cast<index_t>(k), lo, hi);
        t.eigenvalues[static_cast<std::size_t>(k)] = ev;
        t.weights[static_cast<std::size_t>(k)] = e0_weight(t, ev);
    }
    for (std::size_t k = 1; k < t.eigenvalues.size(); ++k)
        if (!(t.eigenvalues[k] > t.eigenvalues[k - 1]))
            throw NumericalError("truncation: bisection did not separate eigenvalues " + std::to_string(k - 1) +
                                 " and " + std::to_string(k));
    return t;
}

std::vector<double> truncation_outside(const CoefficientModel& model, index_t N, double delta) {
    const TruncationOracle t = truncation_matrix(model, N);
    double lo, hi;
    gershgorin(t, lo, hi);
    const index_t below = sturm_count(t, -1.0 - delta);
    const index_t upto = sturm_count(t, 1.0 + delta);
    std::vector<double> out;
    for (index_t k = 0; k < below; ++k) out.push_back(bisect(t, k, lo, hi));
    for (index_t k = upto; k < N; ++k) out.push_back(bisect(t, k, lo, hi));
    return out;
}

OracleReport oracle_compare(const CoefficientModel& model, double lo, double hi, index_t count, index_t N_trunc,
                            const SpectralOptions& opt) {
    OracleReport rep;
    if (count == 0) return rep;
    if (count < 0) throw ConfigError("oracle_compare: negative bin count");
    if (!(lo < hi) || !(lo >= -1.0 + opt.edge_margin) || !(hi <= 1.0 - opt.edge_margin))
        throw ConfigError("oracle_compare: bins must lie inside the edge margin");

    const TruncationOracle t = truncation_spectrum(model, N_trunc);
    const double width = (hi - lo) / static_cast<double>(count);

    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& absc = Rule::abscissa();
    const auto& wts = Rule::weights();
    std::vector<double> nodes, qw;
    for (index_t k = 0; k < count; ++k) {
        const double c = lo + (static_cast<double>(k) + 0.5) * width, r = 0.5 * width;
        for (std::size_t j = 0; j < absc.size(); ++j) {
            nodes.push_back(c + r * absc[j]);
            qw.push_back(r * wts[j]);
            if (absc[j] != 0.0) {
                nodes.push_back(c - r * absc[j]);
                qw.push_back(r * wts[j]);
            }
        }
    }
    const std::vector<WeightPoint> w = weight_scan(model, nodes, opt);
    const std::size_t per_bin = nodes.size() / static_cast<std::size_t>(count);

    for (index_t k = 0; k < count; ++k) {
        BinRow row;
        row.lo = lo + static_cast<double>(k) * width;
        row.hi = k + 1 == count ? hi : row.lo + width;
        row.trunc_mass = 0.0;
        for (std::size_t j = 0; j < t.eigenvalues.size(); ++j)
            if (t.eigenvalues[j] >= row.lo && t.eigenvalues[j] < row.hi) row.trunc_mass += t.weights[j];
        row.weight_mass = 0.0;
        for (std::size_t j = 0; j < per_bin; ++j) {
            const std::size_t i = static_cast<std::size_t>(k) * per_bin + j;
            row.weight_mass += qw[i] * w[i].w;
        }
        row.diff = row.trunc_mass - row.weight_mass;
        rep.max_bin_discrepancy = std::max(rep.max_bin_discrepancy, std::abs(row.diff));
        rep.bins.push_back(row);
    }

    const std::vector<double> ej = find_eigenvalues(model).eigenvalues;
    std::vector<double> et = truncation_outside(model, N_trunc);
    std::vector<bool> used(et.size(), false);
    for (double x : ej) {
        std::size_t best = et.size();
        for (std::size_t j = 0; j < et.size(); ++j)
            if (!used[j] && (best == et.size() || std::abs(et[j] - x) < std::abs(et[best] - x))) best = j;
        if (best == et.size() || std::abs(et[best] - x) > 1e-3) {
            ++rep.unmatched;
            continue;
        }
        used[best] = true;
        rep.eigen.push_back({x, et[best]});
        rep.max_eigen_diff = std::max(rep.max_eigen_diff, std::abs(et[best] - x));
    }
    for (bool u : used)
        if (!u) ++rep.unmatched;
    return rep;
}

}  // namespace jacobi
