#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

namespace jacobi {

using index_t = std::int64_t;

// Largest index any routine is allowed to touch.
inline constexpr index_t kHardCap = 10'000'000;

struct Coeffs {
    double a;
    double b;
};

enum class ModelKind { Free, PowerLaw, ExplicitList, Composite };

/// Jacobi coefficients a_n, b_n converging to the free values 1/2, 0.
///
/// PowerLaw: a_n = 1/2 + alpha n^{-r1}, b_n = b n^{-r2} for n >= 1, and the
/// power-law part is zero at n = 0.  ExplicitList holds a_n, b_n for the first
/// few indices and is Free afterwards.  Composite adds the list's deviation
/// from Free to a power law.
class CoefficientModel {
public:
    static CoefficientModel free();
    static CoefficientModel power_law(double alpha, double r1, double b, double r2);
    static CoefficientModel explicit_list(std::vector<double> a_list, std::vector<double> b_list);
    static CoefficientModel composite(double alpha, double r1, double b, double r2,
                                      std::vector<double> a_list, std::vector<double> b_list);

    static CoefficientModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    ModelKind kind() const { return kind_; }

    /// a_n, b_n for n >= -1.  At n = -1 returns (1/2, 0).
    Coeffs eval(index_t n) const;

    /// (a_n - a_{n-1}, b_n - b_{n-1}) for n >= 0, evaluated without
    /// subtracting two numbers near 1/2.
    Coeffs diff(index_t n) const;

    /// eps_n = sum_{m >= n} (|a_{m+1} - a_m| + |b_{m+1} - b_m|).
    double eps(index_t n) const;

    /// First index past which the coefficients are exactly Free (0 for pure
    /// power laws with alpha = b = 0, list length for lists).  Returns
    /// std::nullopt when the power-law part is nonzero.
    std::optional<index_t> free_from() const;

    /// sup_n (|a_n - 1/2| + |b_n|).
    double sup_perturbation() const;

    /// (alpha_n, b_n) with alpha_n = a_n - 1/2, without rounding through 1/2.
    Coeffs perturbation(index_t n) const;

    /// Partial sum sum_{m < n} alpha_m and sum_{m < n} b_m where alpha_m = a_m - 1/2.
    Coeffs perturbation_sum(index_t n) const;

    double alpha() const { return alpha_; }
    double r1() const { return r1_; }
    double b() const { return b_; }
    double r2() const { return r2_; }
    const std::vector<double>& a_list() const { return a_list_; }
    const std::vector<double>& b_list() const { return b_list_; }

private:
    CoefficientModel() = default;
    void validate() const;
    double list_a_dev(index_t n) const;
    double list_b(index_t n) const;
    index_t list_len() const;

    ModelKind kind_ = ModelKind::Free;
    double alpha_ = 0.0, r1_ = 1.0, b_ = 0.0, r2_ = 1.0;
    std::vector<double> a_list_, b_list_;
};

struct VariationTail {
    std::vector<double> eps;           // eps[n] for n = 0..max_n
    std::optional<index_t> n_star;     // first n with eps[n] < tol
};

/// Tabulates eps_n for n <= max_n.  Throws NumericalError if eps_{max_n} >= tol.
VariationTail variation_tail(const CoefficientModel& model, double tol, index_t max_n);

/// Smallest n in [n_lo, n_hi] with eps_n < tol, or nullopt.
std::optional<index_t> first_index_below(const CoefficientModel& model, double tol,
                                         index_t n_lo, index_t n_hi);

}  // namespace jacobi
