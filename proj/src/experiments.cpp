#include "rmtlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "rmtlab/parallel.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/sampler.hpp"
#include "rmtlab/semicircle.hpp"
#include "rmtlab/walks.hpp"

namespace rmtlab::experiments {

namespace {

using Clock = std::chrono::steady_clock;

long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return std::nan("");
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) /
                     static_cast<double>(v.size()));
}

std::uint64_t row_seed(std::uint64_t master_seed, std::uint64_t trial_id) {
    return stream_root(master_seed, trial_id, ~0ULL);
}

void check_common(const SweepConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    if (config.n_list.empty()) throw std::invalid_argument("sweep: n_list must be nonempty");
    if (!std::is_sorted(config.n_list.begin(), config.n_list.end()) ||
        std::adjacent_find(config.n_list.begin(), config.n_list.end()) != config.n_list.end()) {
        throw std::invalid_argument("sweep: n_list must be strictly increasing");
    }
    if (!(config.delta > 0.0)) throw std::invalid_argument("sweep: delta must be positive");
}

void fill_common(SweepRow& row, const VarianceProfile& profile, const SweepConfig& config,
                 int n, int trial, std::uint64_t trial_id) {
    row.n = n;
    row.d = profile.kind() == VarianceProfile::Kind::band ? profile.w() : profile.d();
    row.trial = trial;
    row.sigma_star = profile.sigma_star();
    row.sigma_sqrtlog = profile.sigma_star() * std::sqrt(std::log(static_cast<double>(n)));
    row.seed = row_seed(config.master_seed, trial_id);
}

}  // namespace

int admissible_clique_degree(int n, int target_d) {
    int best = -1;
    for (int q = 3; q <= n; ++q) {
        if (n % q != 0) continue;
        const int d = q - 1;
        if (best < 0 || std::abs(d - target_d) < std::abs(best - target_d) ||
            (std::abs(d - target_d) == std::abs(best - target_d) && d > best)) {
            best = d;
        }
    }
    if (best < 0) {
        throw DimensionMismatch("no admissible clique degree for n=" + std::to_string(n));
    }
    return best;
}

int resolve_degree(const SweepConfig& config, int n) {
    if (config.d_rule == "fixed") return config.d;
    if (config.d_rule == "log2") {
        const double ln = std::log(static_cast<double>(n));
        const int target = static_cast<int>(std::floor(ln * ln));
        if (config.profile == "clique") return admissible_clique_degree(n, target);
        return target;
    }
    throw std::invalid_argument("unknown d_rule '" + config.d_rule + "'");
}

VarianceProfile build_profile(const SweepConfig& config, int n) {
    if (config.profile == "full") return full_wigner_profile(n);
    if (config.profile == "clique") return clique_union_profile(n, resolve_degree(config, n));
    if (config.profile == "band") return band_profile(n, config.d);
    if (config.profile == "regular") {
        return random_regular_profile(n, resolve_degree(config, n), config.master_seed);
    }
    throw std::invalid_argument("unknown profile family '" + config.profile + "'");
}

Spectrum trial_spectrum(const VarianceProfile& profile, const EntryDistribution& dist,
                        std::uint64_t master_seed, std::int64_t trial_id) {
    if (profile.block_diagonal() && profile.block_count() > 1) {
        Spectrum spec;
        spec.method = Spectrum::Method::dense;
        spec.eigenvalues.reserve(static_cast<std::size_t>(profile.n()));
        for (int b = 0; b < profile.block_count(); ++b) {
            const MatrixSample block = sample_block(profile, dist, master_seed, trial_id, b);
            const Spectrum bs = eig_sym(block);
            spec.eigenvalues.insert(spec.eigenvalues.end(), bs.eigenvalues.begin(),
                                    bs.eigenvalues.end());
        }
        std::stable_sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), std::greater<>());
        return spec;
    }
    return eig_sym(sample_matrix(profile, dist, master_seed, trial_id));
}

void SweepResult::write_csv(std::ostream& os) const {
    os << "n,d,trial,sigma_star,sigma_sqrtlog,lambda_max,lambda_min,ks,outlier_flag,seed,"
          "wall_ms\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.d << ',' << r.trial << ',' << fmt17(r.sigma_star) << ','
           << fmt17(r.sigma_sqrtlog) << ',' << fmt17(r.lambda_max) << ',' << fmt17(r.lambda_min)
           << ',' << fmt17(r.ks) << ',' << r.outlier_flag << ',' << r.seed << ','
           << (config.timings ? r.wall_ms : 0) << '\n';
    }
}

double SweepResult::median_ks(int n) const {
    std::vector<double> v;
    for (const auto& r : rows) {
        if (r.n == n) v.push_back(r.ks);
    }
    return median(std::move(v));
}

double SweepResult::outlier_fraction(int n) const {
    long flags = 0;
    long count = 0;
    for (const auto& r : rows) {
        if (r.n == n) {
            ++count;
            flags += r.outlier_flag;
        }
    }
    return count ? static_cast<double>(flags) / static_cast<double>(count) : std::nan("");
}

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["profile"] = profile;
    j["dist"] = dist;
    j["n_list"] = n_list;
    j["d_rule"] = d_rule;
    j["d"] = d;
    j["trials"] = trials;
    j["length"] = length;
    j["delta"] = delta;
    j["epsilon"] = epsilon;
    j["master_seed"] = master_seed;
    j["threads"] = threads;
    j["norm_mode"] = norm_mode;
    j["timings"] = timings;
    return j;
}

nlohmann::json SweepResult::summary_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    nlohmann::json per_n = nlohmann::json::array();
    for (int n : config.n_list) {
        nlohmann::json e;
        e["n"] = n;
        long blocks_exceeding = 0;
        long blocks_total = 0;
        for (const auto& r : rows) {
            if (r.n != n) continue;
            e["d"] = r.d;
            e["sigma_star"] = r.sigma_star;
            e["sigma_sqrtlog"] = r.sigma_sqrtlog;
            blocks_exceeding += r.blocks_exceeding;
            blocks_total += r.blocks_total;
        }
        const double mks = median_ks(n);
        if (std::isnan(mks)) {
            e["median_ks"] = nullptr;
        } else {
            e["median_ks"] = mks;
        }
        e["outlier_fraction"] = outlier_fraction(n);
        if (blocks_total > 0) {
            const double rate =
                static_cast<double>(blocks_exceeding) / static_cast<double>(blocks_total);
            e["per_block_exceedance"] = rate;
            // diagnostic only: compare log-rate against -eps*d
            if (rate > 0.0) {
                e["log_per_block_exceedance"] = std::log(rate);
            } else {
                e["log_per_block_exceedance"] = nullptr;
            }
            e["eps_times_d"] = config.epsilon * e["d"].get<double>();
        }
        per_n.push_back(e);
    }
    j["per_n"] = per_n;
    j["total_wall_ms"] = total_wall_ms;
    return j;
}

SweepResult run_bulk_convergence(const SweepConfig& config) {
    check_common(config);
    const auto t0 = Clock::now();
    const EntryDistribution dist = EntryDistribution::parse(config.dist);

    std::vector<VarianceProfile> profiles;
    profiles.reserve(config.n_list.size());
    for (int n : config.n_list) profiles.push_back(build_profile(config, n));
    if (config.n_list.size() > 1) {
        const double first = profiles.front().sigma_star();
        const double last = profiles.back().sigma_star();
        if (!(last < first)) {
            throw std::invalid_argument(
                "run_bulk_convergence: profile family must have sigma* decreasing along n_list");
        }
    }

    SweepResult result;
    result.config = config;
    result.rows.resize(config.n_list.size() * static_cast<std::size_t>(config.trials));
    parallel_for(result.rows.size(), config.threads, [&](std::size_t idx) {
        const auto row_t0 = Clock::now();
        const std::size_t n_idx = idx / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(idx % static_cast<std::size_t>(config.trials));
        const VarianceProfile& profile = profiles[n_idx];
        SweepRow row;
        fill_common(row, profile, config, config.n_list[n_idx], trial, idx);
        const Spectrum spec =
            trial_spectrum(profile, dist, config.master_seed, static_cast<std::int64_t>(idx));
        row.lambda_max = spec.lambda_max();
        row.lambda_min = spec.lambda_min();
        row.ks = semicircle::ks_distance(spec);
        row.outlier_flag = row.lambda_max > 2.0 + config.delta ? 1 : 0;
        row.wall_ms = ms_since(row_t0);
        result.rows[idx] = row;
    });
    result.total_wall_ms = ms_since(t0);
    return result;
}

SweepResult run_absence_sweep(const SweepConfig& config) {
    check_common(config);
    if (!(config.profile == "full" || config.d_rule == "log2")) {
        throw std::invalid_argument(
            "run_absence_sweep: requires the full profile or a superlogarithmic d_rule");
    }
    const auto t0 = Clock::now();
    const EntryDistribution dist = EntryDistribution::parse(config.dist);

    std::vector<VarianceProfile> profiles;
    profiles.reserve(config.n_list.size());
    for (int n : config.n_list) profiles.push_back(build_profile(config, n));

    SweepResult result;
    result.config = config;
    result.rows.resize(config.n_list.size() * static_cast<std::size_t>(config.trials));
    parallel_for(result.rows.size(), config.threads, [&](std::size_t idx) {
        const auto row_t0 = Clock::now();
        const std::size_t n_idx = idx / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(idx % static_cast<std::size_t>(config.trials));
        const VarianceProfile& profile = profiles[n_idx];
        SweepRow row;
        fill_common(row, profile, config, config.n_list[n_idx], trial, idx);
        row.ks = std::nan("");

        const bool blockwise = profile.block_diagonal() && profile.block_count() > 1;
        const bool lanczos = config.norm_mode == "lanczos" ||
                             (config.norm_mode == "auto" && !blockwise);
        if (blockwise && config.norm_mode != "lanczos") {
            double lmax = -std::numeric_limits<double>::infinity();
            double lmin = std::numeric_limits<double>::infinity();
            for (int b = 0; b < profile.block_count(); ++b) {
                const MatrixSample block = sample_block(profile, dist, config.master_seed,
                                                        static_cast<std::int64_t>(idx), b);
                const Spectrum bs = eig_sym(block);
                lmax = std::max(lmax, bs.lambda_max());
                lmin = std::min(lmin, bs.lambda_min());
            }
            row.lambda_max = lmax;
            row.lambda_min = lmin;
        } else {
            const MatrixSample sample =
                sample_matrix(profile, dist, config.master_seed, static_cast<std::int64_t>(idx));
            if (lanczos) {
                const int n = sample.n;
                const double* a = sample.values.data();
                const ExtremeEigen ext = lanczos_extremes(
                    [a, n](const double* in, double* out) {
                        for (int i = 0; i < n; ++i) {
                            const double* rowp = a + static_cast<std::size_t>(i) * n;
                            double s = 0.0;
                            for (int j = 0; j < n; ++j) s += rowp[j] * in[j];
                            out[i] = s;
                        }
                    },
                    n);
                row.lambda_max = ext.lambda_max;
                row.lambda_min = ext.lambda_min;
            } else {
                const Spectrum spec = eig_sym(sample);
                row.lambda_max = spec.lambda_max();
                row.lambda_min = spec.lambda_min();
            }
        }
        row.outlier_flag = row.lambda_max > 2.0 + config.delta ? 1 : 0;
        row.wall_ms = ms_since(row_t0);
        result.rows[idx] = row;
    });
    result.total_wall_ms = ms_since(t0);
    return result;
}

SweepResult run_presence_experiment(const SweepConfig& config) {
    check_common(config);
    if (config.profile != "clique") {
        throw std::invalid_argument("run_presence_experiment: profile must be clique");
    }
    const auto t0 = Clock::now();
    const EntryDistribution dist = EntryDistribution::parse(config.dist);

    std::vector<VarianceProfile> profiles;
    profiles.reserve(config.n_list.size());
    for (int n : config.n_list) profiles.push_back(build_profile(config, n));

    SweepResult result;
    result.config = config;
    result.rows.resize(config.n_list.size() * static_cast<std::size_t>(config.trials));
    parallel_for(result.rows.size(), config.threads, [&](std::size_t idx) {
        const auto row_t0 = Clock::now();
        const std::size_t n_idx = idx / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(idx % static_cast<std::size_t>(config.trials));
        const VarianceProfile& profile = profiles[n_idx];
        SweepRow row;
        fill_common(row, profile, config, config.n_list[n_idx], trial, idx);
        row.ks = std::nan("");

        const double threshold = 2.0 + config.delta;
        double lmax = -std::numeric_limits<double>::infinity();
        double lmin = std::numeric_limits<double>::infinity();
        long exceeding = 0;
        for (int b = 0; b < profile.block_count(); ++b) {
            const MatrixSample block = sample_block(profile, dist, config.master_seed,
                                                    static_cast<std::int64_t>(idx), b);
            const Spectrum bs = eig_sym(block);
            lmax = std::max(lmax, bs.lambda_max());
            lmin = std::min(lmin, bs.lambda_min());
            if (bs.lambda_max() > threshold) ++exceeding;
        }
        row.lambda_max = lmax;
        row.lambda_min = lmin;
        row.outlier_flag = lmax > threshold ? 1 : 0;
        row.blocks_exceeding = exceeding;
        row.blocks_total = profile.block_count();
        row.wall_ms = ms_since(row_t0);
        result.rows[idx] = row;
    });
    result.total_wall_ms = ms_since(t0);
    return result;
}

void MomentConvergenceResult::write_csv(std::ostream& os) const {
    os << "n,d,length,trial,moment,moment2\n";
    for (const auto& p : points) {
        for (std::size_t t = 0; t < p.per_trial.size(); ++t) {
            os << p.n << ',' << p.d << ',' << p.length << ',' << t << ','
               << fmt17(p.per_trial[t]) << ',' << fmt17(p.per_trial_m2[t]) << '\n';
        }
    }
}

nlohmann::json MomentConvergenceResult::summary_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json e;
        e["n"] = p.n;
        e["d"] = p.d;
        e["length"] = p.length;
        e["mc_mean"] = p.mean;
        e["mc_se"] = p.se;
        e["mc_mean_m2"] = p.mean_m2;
        e["mc_se_m2"] = p.se_m2;
        if (p.exact_known) {
            e["exact"] = rational_str(p.exact);
            e["exact_value"] = static_cast<double>(p.exact);
        }
        e["catalan"] = p.catalan;
        pts.push_back(e);
    }
    j["points"] = pts;
    j["total_wall_ms"] = total_wall_ms;
    return j;
}

MomentConvergenceResult run_moment_convergence(const SweepConfig& config) {
    check_common(config);
    if (config.length < 2 || config.length % 2 != 0 || config.length > 8) {
        throw std::invalid_argument("run_moment_convergence: length must be even, 2..8");
    }
    const auto t0 = Clock::now();
    const EntryDistribution dist = EntryDistribution::parse(config.dist);

    MomentConvergenceResult result;
    result.config = config;
    for (std::size_t n_idx = 0; n_idx < config.n_list.size(); ++n_idx) {
        const int n = config.n_list[n_idx];
        const VarianceProfile profile = build_profile(config, n);
        MomentConvergencePoint point;
        point.n = n;
        point.d = profile.d();
        point.length = config.length;
        point.per_trial.resize(static_cast<std::size_t>(config.trials));
        point.per_trial_m2.resize(static_cast<std::size_t>(config.trials));
        parallel_for(static_cast<std::size_t>(config.trials), config.threads,
                     [&](std::size_t t) {
                         const std::uint64_t trial_id =
                             n_idx * static_cast<std::size_t>(config.trials) + t;
                         const Spectrum spec =
                             trial_spectrum(profile, dist, config.master_seed,
                                            static_cast<std::int64_t>(trial_id));
                         double s = 0.0;
                         double s2 = 0.0;
                         for (double lam : spec.eigenvalues) {
                             s += std::pow(lam, config.length);
                             s2 += lam * lam;
                         }
                         point.per_trial[t] = s / n;
                         point.per_trial_m2[t] = s2 / n;
                     });
        point.mean = mean_of(point.per_trial);
        point.se = stderr_of(point.per_trial);
        point.mean_m2 = mean_of(point.per_trial_m2);
        point.se_m2 = stderr_of(point.per_trial_m2);
        if (profile.kind() == VarianceProfile::Kind::clique_union) {
            try {
                const walks::MomentValue mv = walks::local_moment(
                    walks::RootedGraph::clique(profile.d()), config.length, dist);
                if (mv.exact) {
                    point.exact_known = true;
                    point.exact = mv.rational;
                }
            } catch (const BudgetExceeded&) {
                // exact prediction unavailable at this degree
            }
        }
        point.catalan = static_cast<double>(semicircle::moment(config.length));
        result.points.push_back(std::move(point));
    }
    result.total_wall_ms = ms_since(t0);
    return result;
}

TailOracleResult per_block_tail_oracle(int d, const EntryDistribution& dist, long samples,
                                       double tail_prob, std::uint64_t seed, int threads) {
    if (samples < 1000) throw std::invalid_argument("tail oracle: need at least 1e3 samples");
    if (!(tail_prob > 0.0 && tail_prob < 1.0)) {
        throw std::invalid_argument("tail oracle: tail_prob must lie in (0,1)");
    }
    const VarianceProfile block_profile = clique_union_profile(d + 1, d);
    std::vector<double> top(static_cast<std::size_t>(samples));
    parallel_for(top.size(), threads, [&](std::size_t i) {
        const MatrixSample sample =
            sample_matrix(block_profile, dist, seed, static_cast<std::int64_t>(i));
        top[i] = eig_sym(sample).lambda_max();
    });
    std::sort(top.begin(), top.end());
    const double target = (1.0 - tail_prob) * static_cast<double>(samples);
    std::size_t rank = static_cast<std::size_t>(std::ceil(target));
    if (rank < 1) rank = 1;
    if (rank > top.size()) rank = top.size();
    TailOracleResult result;
    result.d = d;
    result.samples = samples;
    result.tail_prob = tail_prob;
    result.quantile = top[rank - 1];
    result.delta = result.quantile - 2.0;
    result.seed = seed;
    return result;
}

}  // namespace rmtlab::experiments
