#pragma once

#include <vector>

#include "jacobi/spectral.hpp"

namespace jacobi {

/// Spectral data of the N x N truncation, computed without the Jost pipeline.
struct TruncationOracle {
    index_t N = 0;
    std::vector<double> a;            // a_0..a_{N-2}
    std::vector<double> b;            // b_0..b_{N-1}
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> weights;      // squared first eigenvector components
};

/// Tridiagonal truncation of the model.
TruncationOracle truncation_matrix(const CoefficientModel& model, index_t N);

/// Number of eigenvalues of the truncation strictly below x (Sturm count).
index_t sturm_count(const TruncationOracle& t, double x);

/// k-th eigenvalue (0-based, ascending) by bisection.
double sturm_eigenvalue(const TruncationOracle& t, index_t k);

/// Squared first component of the normalized eigenvector for eigenvalue mu.
double e0_weight(const TruncationOracle& t, double mu);

/// All eigenvalues and weights.  Throws NumericalError if bisection fails to separate two eigenvalues.
TruncationOracle truncation_spectrum(const CoefficientModel& model, index_t N, bool parallel = true);

/// Eigenvalues of the truncation outside [-1-delta, 1+delta].
std::vector<double> truncation_outside(const CoefficientModel& model, index_t N, double delta = 1e-3);

struct BinRow {
    double lo, hi;
    double trunc_mass;   // sum of truncation weights in [lo, hi)
    double weight_mass;  // int_lo^hi w
    double diff;
};

struct EigenPair {
    double jost;
    double trunc;
};

struct OracleReport {
    std::vector<BinRow> bins;
    double max_bin_discrepancy = 0.0;
    std::vector<EigenPair> eigen;
    double max_eigen_diff = 0.0;
    index_t unmatched = 0;  // eigenvalues present in only one list
};

/// Compares histograms of truncation weights against integrals of w over
/// `count` equal bins of [lo, hi], and eigenvalue lists.  count = 0 gives an
/// empty report.
OracleReport oracle_compare(const CoefficientModel& model, double lo, double hi, index_t count, index_t N_trunc,
                            const SpectralOptions& opt = {});

}  // namespace jacobi
