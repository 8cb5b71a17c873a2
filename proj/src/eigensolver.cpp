#include "rmtlab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "rmtlab/rng.hpp"

namespace rmtlab {

namespace {

constexpr double kDeflationTol = 1e-15;
constexpr int kMaxSweepsDense = 50;

// Householder reduction to tridiagonal form, eigenvalue-only path. a is
// row-major and is destroyed. On return d holds the diagonal and e[i] the
// coupling between i-1 and i (e[0] = 0).
void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                    std::vector<double>& e) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(A(i, k));
            if (scale == 0.0) {
                e[i] = A(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    double gg = 0.0;
                    for (int k = 0; k <= j; ++k) gg += A(j, k) * A(i, k);
                    for (int k = j + 1; k <= l; ++k) gg += A(k, j) * A(i, k);
                    e[j] = gg / h;
                    f += e[j] * A(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    const double fj = A(i, j);
                    const double gj = e[j] - hh * fj;
                    e[j] = gj;
                    for (int k = 0; k <= j; ++k) A(j, k) -= (fj * e[k] + gj * A(i, k));
                }
            }
        } else {
            e[i] = A(i, l);
        }
    }
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = A(i, i);
}

// Implicit-shift QL with Wilkinson shifts on (d, e); e[i] couples i and i+1.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n, int max_sweeps) {
    if (n <= 1) return;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= kDeflationTol * dd) break;
            }
            if (m != l) {
                if (iter++ == max_sweeps) {
                    throw NoConvergence("QL: eigenvalue " + std::to_string(l) +
                                        " not converged in " + std::to_string(max_sweeps) +
                                        " sweeps");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i;
                r = 1.0;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    const double t = (d[i] - g) * s + 2.0 * c * b;
                    p = s * t;
                    d[i + 1] = g + p;
                    g = c * t - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

double Spectrum::operator_norm() const {
    if (eigenvalues.empty()) return 0.0;
    return std::max(std::fabs(eigenvalues.front()), std::fabs(eigenvalues.back()));
}

double Spectrum::sum() const {
    double s = 0.0;
    for (double v : eigenvalues) s += v;
    return s;
}

double Spectrum::sum_sq() const {
    double s = 0.0;
    for (double v : eigenvalues) s += v * v;
    return s;
}

double Histogram::in_range_mass() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> sub,
                                            int max_sweeps) {
    const int n = static_cast<int>(diag.size());
    sub.resize(n, 0.0);
    ql_implicit(diag, sub, n, max_sweeps);
    return diag;
}

Spectrum eig_sym(std::span<const double> matrix, int n) {
    if (n < 1) throw std::invalid_argument("eig_sym: n must be >= 1");
    if (matrix.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("eig_sym: matrix size mismatch");
    }
    std::vector<double> a(matrix.begin(), matrix.end());
    std::vector<double> d;
    std::vector<double> e;
    tridiagonalize(a, n, d, e);
    // shift couplings to e[i] = coupling(i, i+1)
    for (int i = 0; i < n - 1; ++i) e[i] = e[i + 1];
    e[n - 1] = 0.0;
    ql_implicit(d, e, n, kMaxSweepsDense);
    Spectrum spec;
    spec.method = Spectrum::Method::dense;
    spec.eigenvalues = std::move(d);
    std::stable_sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), std::greater<>());
    return spec;
}

Spectrum eig_sym(const MatrixSample& matrix) {
    return eig_sym(std::span<const double>(matrix.values), matrix.n);
}

double ExtremeEigen::operator_norm() const {
    return std::max(std::fabs(lambda_max), std::fabs(lambda_min));
}

double spectral_norm(const MatrixSample& matrix, NormMode mode) {
    if (mode == NormMode::dense) return eig_sym(matrix).operator_norm();
    const int n = matrix.n;
    const double* a = matrix.values.data();
    MatVec apply = [a, n](const double* in, double* out) {
        for (int i = 0; i < n; ++i) {
            const double* row = a + static_cast<std::size_t>(i) * n;
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += row[j] * in[j];
            out[i] = s;
        }
    };
    return spectral_norm_lanczos(apply, n);
}

ExtremeEigen lanczos_extremes(const MatVec& apply, int n, int max_iter, double tol) {
    if (n < 1) throw std::invalid_argument("lanczos_extremes: n must be >= 1");

    // deterministic pseudo-random start vector
    std::vector<double> v(n);
    {
        Stream rng = derive_stream(0x4c414e435a4f53ULL, 0, 0);
        double norm_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = rng.next_gaussian();
            norm_sq += v[i] * v[i];
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
    }

    std::vector<std::vector<double>> basis;
    basis.push_back(v);
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> w(n);
    ExtremeEigen prev;

    const int cap = std::min(max_iter, n);
    for (int j = 0; j < cap; ++j) {
        apply(basis[j].data(), w.data());
        if (j > 0) {
            const double b = beta[j - 1];
            const auto& vp = basis[j - 1];
            for (int i = 0; i < n; ++i) w[i] -= b * vp[i];
        }
        double a = 0.0;
        for (int i = 0; i < n; ++i) a += basis[j][i] * w[i];
        alpha.push_back(a);
        for (int i = 0; i < n; ++i) w[i] -= a * basis[j][i];
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : basis) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += u[i] * w[i];
                for (int i = 0; i < n; ++i) w[i] -= dot * u[i];
            }
        }
        double b = 0.0;
        for (int i = 0; i < n; ++i) b += w[i] * w[i];
        b = std::sqrt(b);

        const std::vector<double> ritz = tridiagonal_eigenvalues(alpha, beta);
        ExtremeEigen est;
        est.iterations = j + 1;
        est.lambda_max = *std::max_element(ritz.begin(), ritz.end());
        est.lambda_min = *std::min_element(ritz.begin(), ritz.end());

        if (j > 0 && std::fabs(est.lambda_max - prev.lambda_max) < tol &&
            std::fabs(est.lambda_min - prev.lambda_min) < tol) {
            return est;
        }
        prev = est;

        if (b <= 1e-13 * std::max(1.0, est.operator_norm())) return est;  // Krylov exhausted
        beta.push_back(b);
        std::vector<double> next(n);
        const double inv = 1.0 / b;
        for (int i = 0; i < n; ++i) next[i] = w[i] * inv;
        basis.push_back(std::move(next));
    }
    if (cap == n) return prev;  // full decomposition reached
    throw NoConvergence("lanczos: no convergence within " + std::to_string(max_iter) +
                        " iterations");
}

double spectral_norm_lanczos(const MatVec& apply, int n, int max_iter, double tol) {
    return lanczos_extremes(apply, n, max_iter, tol).operator_norm();
}

Histogram esd_histogram(const Spectrum& spectrum, int bins, double lo, double hi) {
    if (bins < 1) throw std::invalid_argument("esd_histogram: bins must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("esd_histogram: need lo < hi");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.mass.assign(bins, 0.0);
    const std::size_t n = spectrum.eigenvalues.size();
    if (n == 0) return h;
    const double unit = 1.0 / static_cast<double>(n);
    const double width = (hi - lo) / bins;
    for (double x : spectrum.eigenvalues) {
        if (x < lo) {
            h.mass_below += unit;
        } else if (x > hi) {
            h.mass_above += unit;
        } else {
            int b = static_cast<int>((x - lo) / width);
            if (b == bins) b = bins - 1;  // x == hi
            h.mass[b] += unit;
        }
    }
    return h;
}

}  // namespace rmtlab
