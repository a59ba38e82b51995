#include "jacobi/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

// n^{-r} - (n-1)^{-r} for n >= 2, without cancellation.
double power_step(index_t n, double r) {
    const double x = static_cast<double>(n);
    return -std::pow(x, -r) * std::expm1(-r * std::log1p(-1.0 / x));
}

double power_term(index_t n, double r) {
    return n >= 1 ? std::pow(static_cast<double>(n), -r) : 0.0;
}

// sum_{m >= n+1} |p_m - p_{m-1}| with p_m = m^{-r} (m >= 1), p_0 = 0.
double power_tail(index_t n, double r) {
    return n >= 1 ? std::pow(static_cast<double>(n), -r) : 2.0;
}

bool has_power(ModelKind k) { return k == ModelKind::PowerLaw || k == ModelKind::Composite; }
bool has_list(ModelKind k) { return k == ModelKind::ExplicitList || k == ModelKind::Composite; }

}  // namespace

CoefficientModel CoefficientModel::free() { return CoefficientModel{}; }

CoefficientModel CoefficientModel::power_law(double alpha, double r1, double b, double r2) {
    CoefficientModel m;
    m.kind_ = ModelKind::PowerLaw;
    m.alpha_ = alpha;
    m.r1_ = r1;
    m.b_ = b;
    m.r2_ = r2;
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::explicit_list(std::vector<double> a_list, std::vector<double> b_list) {
    CoefficientModel m;
    m.kind_ = ModelKind::ExplicitList;
    m.a_list_ = std::move(a_list);
    m.b_list_ = std::move(b_list);
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::composite(double alpha, double r1, double b, double r2,
                                             std::vector<double> a_list, std::vector<double> b_list) {
    CoefficientModel m;
    m.kind_ = ModelKind::Composite;
    m.alpha_ = alpha;
    m.r1_ = r1;
    m.b_ = b;
    m.r2_ = r2;
    m.a_list_ = std::move(a_list);
    m.b_list_ = std::move(b_list);
    m.validate();
    return m;
}

void CoefficientModel::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (has_power(kind_)) {
        if (!finite(alpha_) || !finite(b_) || !finite(r1_) || !finite(r2_))
            throw ConfigError("power-law parameters must be finite");
        if (!(r1_ > 0.0 && r1_ <= 1.0)) throw ConfigError("r1 must lie in (0, 1]");
        if (!(r2_ > 0.0 && r2_ <= 1.0)) throw ConfigError("r2 must lie in (0, 1]");
        if (!(alpha_ > -0.5)) throw ConfigError("alpha <= -1/2 makes a_1 non-positive");
    }
    for (double v : a_list_)
        if (!finite(v)) throw ConfigError("a_list entries must be finite");
    for (double v : b_list_)
        if (!finite(v)) throw ConfigError("b_list entries must be finite");
    const index_t len = list_len();
    for (index_t n = 0; n <= len; ++n)
        if (!(eval(n).a > 0.0)) throw ConfigError("a_n must be positive (n = " + std::to_string(n) + ")");
}

index_t CoefficientModel::list_len() const {
    return static_cast<index_t>(std::max(a_list_.size(), b_list_.size()));
}

double CoefficientModel::list_a_dev(index_t n) const {
    if (n < 0 || n >= static_cast<index_t>(a_list_.size())) return 0.0;
    return a_list_[static_cast<std::size_t>(n)] - 0.5;
}

double CoefficientModel::list_b(index_t n) const {
    if (n < 0 || n >= static_cast<index_t>(b_list_.size())) return 0.0;
    return b_list_[static_cast<std::size_t>(n)];
}

Coeffs CoefficientModel::eval(index_t n) const {
    if (n < -1) throw ConfigError("coefficient index below -1");
    if (n == -1) return {0.5, 0.0};
    double a = 0.5, b = 0.0;
    if (has_power(kind_)) {
        a += alpha_ * power_term(n, r1_);
        b += b_ * power_term(n, r2_);
    }
    if (has_list(kind_)) {
        a += list_a_dev(n);
        b += list_b(n);
    }
    if (!(a > 0.0)) throw ConfigError("a_n <= 0 at n = " + std::to_string(n));
    return {a, b};
}

Coeffs CoefficientModel::diff(index_t n) const {
    if (n < 0) throw ConfigError("difference index below 0");
    double da = 0.0, db = 0.0;
    if (has_power(kind_)) {
        if (n == 1) {
            da += alpha_;
            db += b_;
        } else if (n >= 2) {
            da += alpha_ * power_step(n, r1_);
            db += b_ * power_step(n, r2_);
        }
    }
    if (has_list(kind_)) {
        da += list_a_dev(n) - list_a_dev(n - 1);
        db += list_b(n) - list_b(n - 1);
    }
    return {da, db};
}

double CoefficientModel::eps(index_t n) const {
    if (n < 0) throw ConfigError("eps index below 0");
    double s = 0.0;
    index_t from = n;
    if (has_list(kind_)) {
        const index_t len = list_len();
        for (index_t m = n + 1; m <= len; ++m) {
            const Coeffs d = diff(m);
            s += std::abs(d.a) + std::abs(d.b);
        }
        from = std::max(n, len);
    }
    if (has_power(kind_)) s += std::abs(alpha_) * power_tail(from, r1_) + std::abs(b_) * power_tail(from, r2_);
    return s;
}

std::optional<index_t> CoefficientModel::free_from() const {
    if (has_power(kind_) && (alpha_ != 0.0 || b_ != 0.0)) return std::nullopt;
    return has_list(kind_) ? list_len() : 0;
}

double CoefficientModel::sup_perturbation() const {
    double s = 0.0;
    const index_t len = list_len();
    for (index_t n = 0; n <= std::max<index_t>(len, 1); ++n) {
        const Coeffs c = eval(n);
        s = std::max(s, std::abs(c.a - 0.5) + std::abs(c.b));
    }
    // power-law parts are largest at n = 1
    if (has_power(kind_)) s = std::max(s, std::abs(alpha_) + std::abs(b_));
    return s;
}

Coeffs CoefficientModel::perturbation(index_t n) const {
    if (n < 0) return {0.0, 0.0};
    double al = 0.0, b = 0.0;
    if (has_power(kind_)) {
        al += alpha_ * power_term(n, r1_);
        b += b_ * power_term(n, r2_);
    }
    if (has_list(kind_)) {
        al += list_a_dev(n);
        b += list_b(n);
    }
    return {al, b};
}

Coeffs CoefficientModel::perturbation_sum(index_t n) const {
    // Neumaier summation: n can reach 1e7 for slowly decaying tails
    double sa = 0.0, ca = 0.0, sb = 0.0, cb = 0.0;
    auto add = [](double& s, double& c, double v) {
        const double t = s + v;
        c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    };
    for (index_t m = 0; m < n; ++m) {
        const Coeffs c = perturbation(m);
        add(sa, ca, c.a);
        add(sb, cb, c.b);
    }
    return {sa + ca, sb + cb};
}

CoefficientModel CoefficientModel::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("model.kind missing");
    const std::string kind = j["kind"].get<std::string>();

    std::set<std::string> allowed{"kind"};
    if (kind == "power_law" || kind == "composite") allowed.insert({"alpha", "r1", "b", "r2"});
    if (kind == "explicit" || kind == "composite") allowed.insert({"a_list", "b_list"});
    if (kind != "free" && kind != "power_law" && kind != "explicit" && kind != "composite")
        throw ConfigError("unknown model kind '" + kind + "'");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' for kind '" + kind + "'");

    auto num = [&](const char* key, double dflt) {
        if (!j.contains(key)) return dflt;
        if (!j[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
        return j[key].get<double>();
    };
    auto list = [&](const char* key) {
        std::vector<double> v;
        if (!j.contains(key)) return v;
        if (!j[key].is_array()) throw ConfigError(std::string("field '") + key + "' must be an array");
        for (const auto& e : j[key]) {
            if (!e.is_number()) throw ConfigError(std::string("field '") + key + "' must hold numbers");
            v.push_back(e.get<double>());
        }
        return v;
    };

    if (kind == "free") return free();
    if (kind == "power_law") return power_law(num("alpha", 0.0), num("r1", 1.0), num("b", 0.0), num("r2", 1.0));
    if (kind == "explicit") return explicit_list(list("a_list"), list("b_list"));
    return composite(num("alpha", 0.0), num("r1", 1.0), num("b", 0.0), num("r2", 1.0), list("a_list"),
                     list("b_list"));
}

nlohmann::json CoefficientModel::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case ModelKind::Free: j["kind"] = "free"; break;
        case ModelKind::PowerLaw: j["kind"] = "power_law"; break;
        case ModelKind::ExplicitList: j["kind"] = "explicit"; break;
        case ModelKind::Composite: j["kind"] = "composite"; break;
    }
    if (has_power(kind_)) {
        j["alpha"] = alpha_;
        j["r1"] = r1_;
        j["b"] = b_;
        j["r2"] = r2_;
    }
    if (has_list(kind_)) {
        j["a_list"] = a_list_;
        j["b_list"] = b_list_;
    }
    return j;
}

VariationTail variation_tail(const CoefficientModel& model, double tol, index_t max_n) {
    if (!(tol > 0.0)) throw ConfigError("variation_tail: tol must be positive");
    if (max_n < 0 || max_n > kHardCap) throw ConfigError("variation_tail: max_n out of range");
    VariationTail t;
    t.eps.resize(static_cast<std::size_t>(max_n) + 1);
    for (index_t n = 0; n <= max_n; ++n) {
        const double e = model.eps(n);
        t.eps[static_cast<std::size_t>(n)] = e;
        if (!t.n_star && e < tol) t.n_star = n;
    }
    if (!t.n_star) throw NumericalError("variation tail not below tol by max_n");
    return t;
}

std::optional<index_t> first_index_below(const CoefficientModel& model, double tol, index_t n_lo,
                                         index_t n_hi) {
    if (model.eps(n_lo) < tol) return n_lo;
    if (model.eps(n_hi) >= tol) return std::nullopt;
    // eps is non-increasing
    while (n_hi - n_lo > 1) {
        const index_t mid = n_lo + (n_hi - n_lo) / 2;
        if (model.eps(mid) < tol)
            n_hi = mid;
        else
            n_lo = mid;
    }
    return n_hi;
}

}  // namespace jacobi
