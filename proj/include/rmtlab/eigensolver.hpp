#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rmtlab/errors.hpp"
#include "rmtlab/sampler.hpp"

namespace rmtlab {

struct Spectrum {
    enum class Method { dense, lanczos };

    std::vector<double> eigenvalues;  // descending
    std::optional<double> residual_bound;
    Method method = Method::dense;

    double lambda_max() const { return eigenvalues.front(); }
    double lambda_min() const { return eigenvalues.back(); }
    double operator_norm() const;
    double sum() const;
    double sum_sq() const;
};

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> mass;  // per bin, count/n
    double mass_below = 0.0;   // eigenvalue mass left of [lo, hi]
    double mass_above = 0.0;
    double in_range_mass() const;
};

// Full spectrum by Householder tridiagonalization + implicit-shift QL.
// Throws NoConvergence when any eigenvalue needs more than 50 QL sweeps.
Spectrum eig_sym(const MatrixSample& matrix);
Spectrum eig_sym(std::span<const double> matrix, int n);

// Eigenvalues of a symmetric tridiagonal matrix (diag, sub) with
// sub[i] coupling i and i+1. Ascending output order is not guaranteed.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> sub,
                                            int max_sweeps = 50);

enum class NormMode { dense, lanczos };

double spectral_norm(const MatrixSample& matrix, NormMode mode);

// Extreme eigenvalues via Lanczos with full reorthogonalization. Only needs
// the matrix-vector product. Converged when both extreme Ritz values move by
// less than tol between iterations; capped at max_iter.
using MatVec = std::function<void(const double* in, double* out)>;

struct ExtremeEigen {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    int iterations = 0;
    double operator_norm() const;
};

ExtremeEigen lanczos_extremes(const MatVec& apply, int n, int max_iter = 300, double tol = 1e-9);
double spectral_norm_lanczos(const MatVec& apply, int n, int max_iter = 300, double tol = 1e-9);

Histogram esd_histogram(const Spectrum& spectrum, int bins, double lo, double hi);

}  // namespace rmtlab
