#include "jacobi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "jacobi/errors.hpp"
#include "jacobi/oracle.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands{"weight-scan", "asympt-check",   "eig",        "resolvent",
                                         "limits",      "oracle-compare", "convergence"};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json extra = json::object();
};

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const json& v) {
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt_num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

std::string render(const RunConfig& cfg, const Table& t) {
    std::ostringstream os;
    if (cfg.format == "csv") {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
            os << '\n';
        }
        return os.str();
    }
    json j;
    j["schema_version"] = 1;
    j["command"] = cfg.command;
    j["model"] = cfg.model;
    j["grid"] = {{"lo", cfg.grid.lo}, {"hi", cfg.grid.hi}, {"count", cfg.grid.count}};
    j["n_max"] = cfg.n_max;
    j["tol"] = cfg.tol;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    for (const auto& [k, v] : t.extra.items()) j[k] = v;
    return j.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& data) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << data;
        f.flush();
        if (!f) throw IoError("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename output into " + path);
    }
}

Grid grid_or(const RunConfig& cfg, double lo, double hi, long count) {
    if (cfg.grid.given) return cfg.grid;
    return {lo, hi, count, false};
}

JostOptions jost_opts(const RunConfig& cfg) {
    JostOptions o;
    o.tol = cfg.tol;
    o.n_max = cfg.n_max;
    return o;
}

Table cmd_weight_scan(const RunConfig& cfg, const CoefficientModel& model) {
    const Grid g = grid_or(cfg, -0.99, 0.99, 101);
    SpectralOptions so;
    so.jost = jost_opts(cfg);
    Table t;
    t.columns = {"lambda", "w", "kappa", "eta"};
    for (const auto& p : weight_scan(model, g.points(), so)) t.rows.push_back({p.lambda, p.w, p.kappa, p.eta});
    if (cfg.format == "json") t.extra["mass"] = spectral_mass(model, so);
    return t;
}

Table cmd_asympt_check(const RunConfig& cfg, const CoefficientModel& model) {
    const Grid g = grid_or(cfg, 0.5, 0.5, 1);
    SpectralOptions so;
    so.jost = jost_opts(cfg);
    Table t;
    t.columns = {"lambda", "N", "max_residual", "eps_N"};
    const index_t nmax = cfg.n_max;
    for (double lam : g.points()) {
        const std::vector<double> pred = predict_Pn_sequence(model, lam, nmax, so);
        const PolySequence P = eval_poly(model, cd(lam, 0.0), nmax);
        for (index_t N = 10; 2 * N <= nmax; N *= 10) {
            double worst = 0.0;
            for (index_t n = N; n <= 2 * N; ++n)
                worst = std::max(worst, std::abs(P.at(n).real() - pred[static_cast<std::size_t>(n)]));
            t.rows.push_back({lam, N, worst, model.eps(N)});
        }
    }
    return t;
}

Table cmd_eig(const RunConfig& cfg, const CoefficientModel& model) {
    EigenSearch es;
    if (cfg.grid.given) es.grid = cfg.grid.count;
    const EigenResult er = find_eigenvalues(model, es, jost_opts(cfg));
    std::vector<double> tr;
    if (cfg.trunc_size > 0) tr = truncation_outside(model, cfg.trunc_size);
    Table t;
    t.columns = {"eigenvalue", "trunc_eigenvalue", "diff"};
    for (double x : er.eigenvalues) {
        json te = nullptr, d = nullptr;
        if (!tr.empty()) {
            double best = tr.front();
            for (double y : tr)
                if (std::abs(y - x) < std::abs(best - x)) best = y;
            te = best;
            d = std::abs(best - x);
        }
        t.rows.push_back({x, te, d});
    }
    t.extra["warnings"] = er.warnings;
    return t;
}

Table cmd_resolvent(const RunConfig& cfg, const CoefficientModel& model) {
    const Grid g = grid_or(cfg, -0.5, 0.5, 3);
    SpectralOptions so;
    so.jost = jost_opts(cfg);
    const index_t S = 4;
    Table t;
    t.columns = {"lambda", "n", "m", "R_plus_re", "R_plus_im", "R_minus_re", "R_minus_im", "jump", "w_PnPm"};
    for (double lam : g.points()) {
        const auto Rp = resolvent_block(model, SpectralPoint::plus(lam), S, so.jost);
        const auto Rm = resolvent_block(model, SpectralPoint::minus(lam), S, so.jost);
        const WeightPoint wp = weight(model, lam, so);
        const PolySequence P = eval_poly(model, cd(lam, 0.0), S);
        for (index_t n = 0; n < S; ++n)
            for (index_t m = n; m < S; ++m) {
                const std::size_t k = static_cast<std::size_t>(n * S + m);
                const cd jump = (Rp[k] - Rm[k]) / cd(0.0, 2.0 * std::numbers::pi);
                t.rows.push_back({lam, n, m, Rp[k].real(), Rp[k].imag(), Rm[k].real(), Rm[k].imag(), jump.real(),
                                  wp.w * P.at(n).real() * P.at(m).real()});
            }
    }
    return t;
}

Table cmd_limits(const RunConfig& cfg, const CoefficientModel& model) {
    const Grid g = grid_or(cfg, 1.5, 3.0, 4);
    Table t;
    t.columns = {"z", "limit_re", "limit_im", "jost_re", "jost_im", "n_used", "converged", "eigenvalue"};
    for (double z : g.points()) {
        if (!(std::abs(z) > 1.0)) throw ConfigError("limits: grid points must satisfy |z| > 1");
        const LimitResult r = limit_qnPn(model, cd(z, 0.0), cfg.tol, cfg.n_max);
        t.rows.push_back({z, r.value.real(), r.value.imag(), r.jost_route.real(), r.jost_route.imag(), r.n_used,
                          r.converged, r.eigenvalue});
    }
    return t;
}

Table cmd_oracle_compare(const RunConfig& cfg, const CoefficientModel& model) {
    const Grid g = grid_or(cfg, -0.95, 0.95, 20);
    SpectralOptions so;
    so.jost = jost_opts(cfg);
    const OracleReport rep = oracle_compare(model, g.lo, g.hi, g.count, cfg.trunc_size > 0 ? cfg.trunc_size : 2000, so);
    Table t;
    t.columns = {"lo", "hi", "trunc_mass", "weight_mass", "diff"};
    for (const auto& b : rep.bins) t.rows.push_back({b.lo, b.hi, b.trunc_mass, b.weight_mass, b.diff});
    json eig = json::array();
    for (const auto& e : rep.eigen) eig.push_back({{"jost", e.jost}, {"trunc", e.trunc}});
    t.extra["max_bin_discrepancy"] = rep.max_bin_discrepancy;
    t.extra["eigenvalues"] = eig;
    t.extra["max_eigen_diff"] = rep.max_eigen_diff;
    t.extra["unmatched"] = rep.unmatched;
    return t;
}

Table cmd_convergence(const RunConfig& cfg, const CoefficientModel& model) {
    const Grid g = grid_or(cfg, 0.5, 0.5, 1);
    Table t;
    t.columns = {"lambda", "N", "omega_re", "omega_im", "eps_N", "delta"};
    for (double lam : g.points()) {
        if (!(std::abs(lam) < 1.0)) throw ConfigError("convergence: grid points must lie in (-1,1)");
        const SpectralPoint p = SpectralPoint::plus(lam);
        JostOptions o = jost_opts(cfg);
        const JostValue ref = jost_value(model, p, o);
        const cd om_ref = ref.omega / ref.k_lambda;
        for (index_t N = 100; N <= cfg.n_max; N *= 10) {
            o.n_max = N;
            const JostValue jv = jost_value(model, p, o);
            const cd om = jv.omega / jv.k_lambda;
            t.rows.push_back({lam, jv.N, om.real(), om.imag(), model.eps(jv.N), std::abs(om - om_ref)});
        }
    }
    return t;
}

void validate(const RunConfig& cfg) {
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        throw ConfigError("unknown command '" + cfg.command + "'");
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    if (cfg.n_max < 1 || cfg.n_max > kHardCap) throw ConfigError("nmax must lie in [1, 1e7]");
    if (cfg.trunc_size < 0) throw ConfigError("trunc-size must be >= 0");
    if (cfg.grid.given && cfg.grid.count < 0) throw ConfigError("grid count must be >= 0");
}

void emit_error(std::ostream& err, const char* kind, const std::string& msg) {
    json e;
    e["error"] = {{"kind", kind}, {"message", msg}};
    err << e.dump() << '\n';
}

}  // namespace

std::vector<double> Grid::points() const {
    std::vector<double> p;
    if (count <= 0) return p;
    if (count == 1) return {lo};
    for (long i = 0; i < count; ++i)
        p.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return p;
}

Grid parse_grid(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : s.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("grid must be lo:hi:count");
    Grid g;
    try {
        std::size_t used = 0;
        const std::string a = s.substr(0, c1), b = s.substr(c1 + 1, c2 - c1 - 1), c = s.substr(c2 + 1);
        g.lo = std::stod(a, &used);
        if (used != a.size()) throw ConfigError("bad grid lo");
        g.hi = std::stod(b, &used);
        if (used != b.size()) throw ConfigError("bad grid hi");
        g.count = std::stol(c, &used);
        if (used != c.size()) throw ConfigError("bad grid count");
    } catch (const std::logic_error&) {
        throw ConfigError("grid must be lo:hi:count");
    }
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.count < 0 || g.count > 1'000'000)
        throw ConfigError("grid values out of range");
    g.given = true;
    return g;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        const CoefficientModel model = CoefficientModel::from_json(cfg.model);
        Table t;
        if (cfg.command == "weight-scan") t = cmd_weight_scan(cfg, model);
        else if (cfg.command == "asympt-check") t = cmd_asympt_check(cfg, model);
        else if (cfg.command == "eig") t = cmd_eig(cfg, model);
        else if (cfg.command == "resolvent") t = cmd_resolvent(cfg, model);
        else if (cfg.command == "limits") t = cmd_limits(cfg, model);
        else if (cfg.command == "oracle-compare") t = cmd_oracle_compare(cfg, model);
        else t = cmd_convergence(cfg, model);
        const std::string text = render(cfg, t);
        if (cfg.out.empty())
            out << text;
        else
            write_atomic(cfg.out, text);
        return 0;
    } catch (const ConfigError& e) {
        emit_error(err, "config", e.what());
        return 2;
    } catch (const NumericalError& e) {
        emit_error(err, "numerical", e.what());
        return 3;
    } catch (const IoError& e) {
        emit_error(err, "io", e.what());
        return 4;
    } catch (const std::bad_alloc&) {
        emit_error(err, "numerical", "out of memory");
        return 3;
    }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Jacobi operators with long-range coefficients"};
    RunConfig cfg;
    std::string model_path, grid;
    app.add_option("command", cfg.command, "weight-scan | asympt-check | eig | resolvent | limits | oracle-compare | convergence")
        ->required();
    app.add_option("--model", model_path, "model JSON file (default: free)");
    app.add_option("--grid", grid, "lo:hi:count");
    app.add_option("--nmax", cfg.n_max, "index cap");
    app.add_option("--tol", cfg.tol, "tolerance");
    app.add_option("--out", cfg.out, "output file (default: stdout)");
    app.add_option("--format", cfg.format, "csv | json");
    app.add_option("--trunc-size", cfg.trunc_size, "truncation size for oracle checks");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "config", e.what());
        return 2;
    }

    try {
        if (!grid.empty()) cfg.grid = parse_grid(grid);
    } catch (const ConfigError& e) {
        emit_error(err, "config", e.what());
        return 2;
    }
    if (model_path.empty()) {
        cfg.model = {{"kind", "free"}};
    } else {
        std::ifstream f(model_path);
        if (!f) {
            emit_error(err, "io", "cannot read model file " + model_path);
            return 4;
        }
        try {
            cfg.model = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            emit_error(err, "config", std::string("model file is not valid JSON: ") + e.what());
            return 2;
        }
    }
    return run(cfg, out, err);
}

}  // namespace jacobi::cli
