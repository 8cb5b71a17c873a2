#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmtlab/errors.hpp"
#include "rmtlab/rational.hpp"

namespace rmtlab {

struct ValidationReport {
    double max_row_sum_deviation = 0.0;  // max_i |sum_j sigma_ij^2 - 1|
    double max_asymmetry = 0.0;          // max_ij |sigma_ij - sigma_ji|
    double min_entry = 0.0;              // most negative entry
    double sigma_star_error = 0.0;       // |recorded sigma* - true max entry|

    static constexpr double kTolerance = 1e-12;
    bool passes() const {
        return max_row_sum_deviation <= kTolerance && max_asymmetry <= kTolerance &&
               min_entry >= -kTolerance && sigma_star_error <= kTolerance;
    }
    std::string summary() const;
};

struct RegularGraph {
    int n = 0;
    int d = 0;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor lists, no self-loops
};

// Uniformly random simple d-regular graph via the pairing model with rejection.
// Deterministic in (n, d, seed); throws GenerationFailure after max_restarts.
RegularGraph random_regular_graph(int n, int d, std::uint64_t seed, int max_restarts = 1000);

// Symmetric nonnegative variance profile Sigma with (sigma_ij^2) doubly
// stochastic. Constructor kinds place a single value on their support, so the
// profile is held structurally; only custom profiles store dense entries.
class VarianceProfile {
public:
    enum class Kind { full, clique_union, band, random_regular, custom };

    static VarianceProfile custom(int n, std::vector<double> entries, bool includes_diagonal);

    Kind kind() const { return kind_; }
    int n() const { return n_; }
    int d() const { return d_; }
    int w() const { return w_; }
    std::uint64_t seed() const { return seed_; }
    bool includes_diagonal() const { return includes_diagonal_; }
    double sigma_star() const { return sigma_star_; }
    std::string kind_name() const;
    std::string describe() const;

    double entry(int i, int j) const;

    // Constant sigma^2 on the support as an exact rational (1/n, 1/d, 1/(2w));
    // absent for custom profiles.
    std::optional<Rational> uniform_entry_sq() const;

    // Column indices j >= i with sigma_ij > 0, ascending.
    std::vector<int> row_support_upper(int i) const;
    // All support neighbors of i (including i itself when the diagonal is live).
    std::vector<int> support_neighbors(int i) const;

    // Clique-union block structure.
    bool block_diagonal() const { return kind_ == Kind::clique_union; }
    int block_size() const { return kind_ == Kind::clique_union ? d_ + 1 : n_; }
    int block_count() const { return kind_ == Kind::clique_union ? n_ / (d_ + 1) : 1; }

    nlohmann::json to_json() const;
    void write_entries_csv(std::ostream& os) const;

    friend VarianceProfile full_wigner_profile(int n);
    friend VarianceProfile clique_union_profile(int n, int d);
    friend VarianceProfile band_profile(int n, int w);
    friend VarianceProfile random_regular_profile(int n, int d, std::uint64_t seed,
                                                  int max_restarts);

private:
    VarianceProfile() = default;

    Kind kind_ = Kind::custom;
    int n_ = 0;
    int d_ = 0;
    int w_ = 0;
    std::uint64_t seed_ = 0;
    bool includes_diagonal_ = false;
    double value_ = 0.0;  // the constant nonzero sigma for structural kinds
    double sigma_star_ = 0.0;
    std::vector<std::vector<int>> adj_;  // random_regular support
    std::vector<double> dense_;          // custom entries, row-major
};

VarianceProfile full_wigner_profile(int n);
VarianceProfile clique_union_profile(int n, int d);
VarianceProfile band_profile(int n, int w);
VarianceProfile random_regular_profile(int n, int d, std::uint64_t seed, int max_restarts = 1000);

ValidationReport validate(const VarianceProfile& profile);

}  // namespace rmtlab
