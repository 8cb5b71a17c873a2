#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmtlab/eigensolver.hpp"
#include "rmtlab/entries.hpp"
#include "rmtlab/profiles.hpp"
#include "rmtlab/rational.hpp"

namespace rmtlab::experiments {

struct SweepConfig {
    std::string mode = "bulk";     // bulk | absence | presence | moment
    std::string profile = "full";  // full | clique | band | regular
    std::string dist = "gaussian";
    std::vector<int> n_list;
    std::string d_rule = "fixed";  // fixed | log2 (d = floor(log^2 n), clique-admissible)
    int d = 0;                     // fixed degree; band half-width for profile=band
    int trials = 1;
    int length = 6;      // moment mode: the even power 2k
    double delta = 0.1;  // outlier margin: flag when lambda_max > 2 + delta
    double epsilon = 0.0;  // recorded for the per-block tail diagnostic only
    std::uint64_t master_seed = 1;
    int threads = 1;
    std::string norm_mode = "auto";  // auto | dense | lanczos
    bool timings = false;            // when false the CSV wall_ms column is 0

    nlohmann::json to_json() const;
};

struct SweepRow {
    int n = 0;
    int d = 0;
    int trial = 0;
    double sigma_star = 0.0;
    double sigma_sqrtlog = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double ks = 0.0;
    int outlier_flag = 0;
    std::uint64_t seed = 0;
    long wall_ms = 0;
    // presence bookkeeping, not part of the CSV
    long blocks_exceeding = 0;
    long blocks_total = 0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;
    long total_wall_ms = 0;

    // Header: n,d,trial,sigma_star,sigma_sqrtlog,lambda_max,lambda_min,ks,
    //         outlier_flag,seed,wall_ms
    void write_csv(std::ostream& os) const;
    nlohmann::json summary_json() const;
    double median_ks(int n) const;
    double outlier_fraction(int n) const;
};

// Bulk convergence (full spectra, KS distance to the semicircle law).
SweepResult run_bulk_convergence(const SweepConfig& config);

// Absence regime: only extreme eigenvalues; lanczos for dense-support
// profiles, per-block dense solves for clique unions.
SweepResult run_absence_sweep(const SweepConfig& config);

// Presence regime on clique-union profiles: block-max statistics without ever
// materializing the full matrix.
SweepResult run_presence_experiment(const SweepConfig& config);

struct MomentConvergencePoint {
    int n = 0;
    int d = 0;
    int length = 0;
    std::vector<double> per_trial;     // (1/n) sum lambda^length
    std::vector<double> per_trial_m2;  // (1/n) sum lambda^2
    double mean = 0.0;
    double se = 0.0;
    double mean_m2 = 0.0;
    double se_m2 = 0.0;
    bool exact_known = false;
    Rational exact;       // clique local moment, when available
    double catalan = 0.0;  // semicircle reference
};

struct MomentConvergenceResult {
    SweepConfig config;
    std::vector<MomentConvergencePoint> points;
    long total_wall_ms = 0;

    void write_csv(std::ostream& os) const;
    nlohmann::json summary_json() const;
};

MomentConvergenceResult run_moment_convergence(const SweepConfig& config);

// Two-stage delta oracle: empirical (1 - tail_prob) quantile of the top block
// eigenvalue over iid (d+1)x(d+1) blocks; delta = quantile - 2.
struct TailOracleResult {
    int d = 0;
    long samples = 0;
    double tail_prob = 0.0;
    double quantile = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

TailOracleResult per_block_tail_oracle(int d, const EntryDistribution& dist, long samples,
                                       double tail_prob, std::uint64_t seed, int threads = 1);

// Largest admissible clique degree near target: minimizes |d - target| over
// d >= 2 with (d+1) | n, preferring the larger d on ties.
int admissible_clique_degree(int n, int target_d);

int resolve_degree(const SweepConfig& config, int n);
VarianceProfile build_profile(const SweepConfig& config, int n);

// Full spectrum of one trial; block-diagonal profiles are solved block by
// block and merged, giving the same multiset as the dense solve.
Spectrum trial_spectrum(const VarianceProfile& profile, const EntryDistribution& dist,
                        std::uint64_t master_seed, std::int64_t trial_id);

}  // namespace rmtlab::experiments
