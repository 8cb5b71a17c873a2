// rmtlab command-line front end: reproducible, file-based workflows over the
// profile/sampler/eigensolver/walks/experiments modules.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rmtlab/eigensolver.hpp"
#include "rmtlab/entries.hpp"
#include "rmtlab/experiments.hpp"
#include "rmtlab/profiles.hpp"
#include "rmtlab/sampler.hpp"
#include "rmtlab/semicircle.hpp"
#include "rmtlab/walks.hpp"

namespace fs = std::filesystem;
using namespace rmtlab;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
}

fs::path prepare_out_dir(const std::string& out, CLI::App* cmd) {
    fs::path dir(out);
    fs::create_directories(dir);
    write_text_file(dir / "resolved_config.txt", cmd->config_to_str(true, false));
    return dir;
}

struct ProfileFlags {
    std::string kind = "full";
    int n = 0;
    int d = 0;
    int w = 0;
    std::uint64_t graph_seed = 1;
};

void add_profile_flags(CLI::App* cmd, ProfileFlags& flags) {
    cmd->add_option("--profile", flags.kind, "profile kind: full | clique | band | regular")
        ->default_val("full");
    cmd->add_option("--n", flags.n, "matrix dimension")->required();
    cmd->add_option("--d", flags.d, "degree (clique/regular profiles)");
    cmd->add_option("--w", flags.w, "half-bandwidth (band profile)");
    cmd->add_option("--graph-seed", flags.graph_seed, "seed for the random regular graph");
}

VarianceProfile make_profile(const ProfileFlags& flags) {
    if (flags.kind == "full") return full_wigner_profile(flags.n);
    if (flags.kind == "clique") return clique_union_profile(flags.n, flags.d);
    if (flags.kind == "band") return band_profile(flags.n, flags.w);
    if (flags.kind == "regular") {
        return random_regular_profile(flags.n, flags.d, flags.graph_seed);
    }
    throw std::invalid_argument("unknown profile kind '" + flags.kind + "'");
}

MatrixSample read_matrix_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw std::runtime_error("empty matrix file " + path);
    MatrixSample sample;
    sample.n = n;
    sample.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) {
            throw std::runtime_error("matrix file is not square: " + path);
        }
        for (int j = 0; j < n; ++j) sample.values[static_cast<std::size_t>(i) * n + j] = rows[i][j];
    }
    sample.profile_ref = path;
    return sample;
}

void write_spectrum_csv(const Spectrum& spec, const fs::path& path) {
    std::ofstream os(path);
    os << "index,eigenvalue\n";
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        os << i << ',' << fmt17(spec.eigenvalues[i]) << '\n';
    }
}

int verify_golden_suite() {
    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
        if (!ok) ++failures;
    };

    const double pi = 3.14159265358979323846;
    check("semicircle_density_origin", std::fabs(semicircle::density(0.0) - 1.0 / pi) < 1e-15,
          "density(0)=" + fmt17(semicircle::density(0.0)));
    check("semicircle_density_unit",
          std::fabs(semicircle::density(1.0) - std::sqrt(3.0) / (2.0 * pi)) < 1e-15,
          "density(1)=" + fmt17(semicircle::density(1.0)));
    check("catalan_moments",
          semicircle::moment(2) == 1 && semicircle::moment(4) == 2 &&
              semicircle::moment(6) == 5 && semicircle::moment(8) == 14,
          "moments(2,4,6,8)=(1,2,5,14)");

    const auto rad = EntryDistribution::rademacher();
    const auto clique = walks::local_moment_report(walks::RootedGraph::clique(3), 6, rad);
    check("clique_sixth_moment",
          clique.moment_is_exact && clique.moment_exact == Rational(31, 9) &&
              clique.even_walks == 93,
          "m=" + rational_str(clique.moment_exact) + ", even walks=" +
              std::to_string(clique.even_walks));
    const auto tree =
        walks::local_moment_report(walks::RootedGraph::truncated_tree(3, 3), 6, rad);
    check("tree_walk_count",
          tree.moment_is_exact && tree.moment_exact == Rational(29, 9) && tree.even_walks == 87,
          "m=" + rational_str(tree.moment_exact) + ", even walks=" +
              std::to_string(tree.even_walks));
    const auto gap = walks::moment_gap(3, 6, rad);
    check("clique_tree_gap", gap.exact && gap.rational == Rational(2, 9), "gap=" + gap.str());

    std::vector<double> k5(25, 1.0);
    for (int i = 0; i < 5; ++i) k5[static_cast<std::size_t>(i) * 5 + i] = 0.0;
    const Spectrum spec = eig_sym(std::span<const double>(k5), 5);
    bool k5_ok = std::fabs(spec.eigenvalues[0] - 4.0) < 1e-10;
    for (int i = 1; i < 5; ++i) k5_ok = k5_ok && std::fabs(spec.eigenvalues[i] + 1.0) < 1e-10;
    check("k5_spectrum", k5_ok, "lambda=(" + fmt17(spec.eigenvalues[0]) + ", ...)");

    std::cout << (failures == 0 ? "verify: all checks passed\n"
                                : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmtlab: sparse inhomogeneous random-matrix laboratory"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---------------------------------------------------------------- profile
    auto* profile_cmd = app.add_subcommand("profile", "construct and validate a variance profile");
    profile_cmd->set_config("--config");
    ProfileFlags profile_flags;
    add_profile_flags(profile_cmd, profile_flags);
    std::string profile_out;
    bool dump_entries = false;
    profile_cmd->add_option("--out", profile_out, "output directory");
    profile_cmd->add_flag("--dump-entries", dump_entries, "also write the dense entries as CSV");
    profile_cmd->callback([&] {
        const VarianceProfile profile = make_profile(profile_flags);
        const ValidationReport report = validate(profile);
        std::cout << profile.describe() << " sigma_star=" << fmt17(profile.sigma_star()) << "\n"
                  << "validation: " << report.summary() << "\n";
        if (!profile_out.empty()) {
            const fs::path dir = prepare_out_dir(profile_out, profile_cmd);
            write_text_file(dir / "profile.json", profile.to_json().dump(2) + "\n");
            if (dump_entries) {
                std::ofstream os(dir / "entries.csv");
                profile.write_entries_csv(os);
            }
        }
        if (!report.passes()) exit_code = 1;
    });

    // ----------------------------------------------------------------- sample
    auto* sample_cmd = app.add_subcommand("sample", "draw one matrix realization");
    sample_cmd->set_config("--config");
    ProfileFlags sample_flags;
    add_profile_flags(sample_cmd, sample_flags);
    std::string sample_dist = "gaussian";
    std::uint64_t sample_seed = 1;
    std::int64_t sample_trial = 0;
    std::string sample_format = "dense";
    std::string sample_out;
    sample_cmd->add_option("--dist", sample_dist,
                           "entry law: gaussian | rademacher | uniform | weibull:<beta>");
    sample_cmd->add_option("--seed", sample_seed, "master seed");
    sample_cmd->add_option("--trial", sample_trial, "trial index");
    sample_cmd->add_option("--format", sample_format, "dense | coo");
    sample_cmd->add_option("--out", sample_out, "output directory")->required();
    sample_cmd->callback([&] {
        const VarianceProfile profile = make_profile(sample_flags);
        const EntryDistribution dist = EntryDistribution::parse(sample_dist);
        const MatrixSample sample = sample_matrix(profile, dist, sample_seed, sample_trial);
        const fs::path dir = prepare_out_dir(sample_out, sample_cmd);
        write_text_file(dir / "profile.json", profile.to_json().dump(2) + "\n");
        if (sample_format == "coo") {
            std::ofstream os(dir / "matrix_coo.csv");
            write_matrix_coo(sample, os);
        } else {
            std::ofstream os(dir / "matrix.csv");
            write_matrix_csv(sample, os);
        }
        std::cout << "wrote " << (sample_format == "coo" ? "matrix_coo.csv" : "matrix.csv")
                  << " (n=" << sample.n << ", trace=" << fmt17(sample.trace()) << ")\n";
    });

    // --------------------------------------------------------------- spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "full spectrum of a matrix");
    spectrum_cmd->set_config("--config");
    std::string spectrum_in;
    ProfileFlags spectrum_flags;
    std::string spectrum_dist = "gaussian";
    std::uint64_t spectrum_seed = 1;
    std::int64_t spectrum_trial = 0;
    std::string spectrum_out;
    spectrum_cmd->add_option("--in", spectrum_in, "dense CSV matrix to read instead of sampling");
    spectrum_cmd->add_option("--profile", spectrum_flags.kind, "profile kind");
    spectrum_cmd->add_option("--n", spectrum_flags.n, "matrix dimension");
    spectrum_cmd->add_option("--d", spectrum_flags.d, "degree");
    spectrum_cmd->add_option("--w", spectrum_flags.w, "half-bandwidth");
    spectrum_cmd->add_option("--graph-seed", spectrum_flags.graph_seed, "regular-graph seed");
    spectrum_cmd->add_option("--dist", spectrum_dist, "entry law");
    spectrum_cmd->add_option("--seed", spectrum_seed, "master seed");
    spectrum_cmd->add_option("--trial", spectrum_trial, "trial index");
    spectrum_cmd->add_option("--out", spectrum_out, "output directory")->required();
    spectrum_cmd->callback([&] {
        MatrixSample sample;
        if (!spectrum_in.empty()) {
            sample = read_matrix_csv(spectrum_in);
        } else {
            if (spectrum_flags.n == 0) {
                throw CLI::ValidationError("spectrum", "need --in or --n with profile flags");
            }
            sample = sample_matrix(make_profile(spectrum_flags),
                                   EntryDistribution::parse(spectrum_dist), spectrum_seed,
                                   spectrum_trial);
        }
        const Spectrum spec = eig_sym(sample);
        const fs::path dir = prepare_out_dir(spectrum_out, spectrum_cmd);
        write_spectrum_csv(spec, dir / "spectrum.csv");
        std::cout << "n=" << sample.n << " lambda_max=" << fmt17(spec.lambda_max())
                  << " lambda_min=" << fmt17(spec.lambda_min())
                  << " norm=" << fmt17(spec.operator_norm()) << "\n";
    });

    // -------------------------------------------------------------------- esd
    auto* esd_cmd = app.add_subcommand(
        "esd", "empirical spectral distribution vs the semicircle law");
    esd_cmd->set_config("--config");
    ProfileFlags esd_flags;
    add_profile_flags(esd_cmd, esd_flags);
    std::string esd_dist = "gaussian";
    std::uint64_t esd_seed = 1;
    std::int64_t esd_trial = 0;
    int esd_bins = 50;
    std::vector<double> esd_range{-2.0, 2.0};
    std::string esd_out;
    esd_cmd->add_option("--dist", esd_dist, "entry law");
    esd_cmd->add_option("--seed", esd_seed, "master seed");
    esd_cmd->add_option("--trial", esd_trial, "trial index");
    esd_cmd->add_option("--bins", esd_bins, "histogram bins");
    esd_cmd->add_option("--range", esd_range, "histogram range: lo hi")->expected(2);
    esd_cmd->add_option("--out", esd_out, "output directory")->required();
    esd_cmd->callback([&] {
        const VarianceProfile profile = make_profile(esd_flags);
        const EntryDistribution dist = EntryDistribution::parse(esd_dist);
        const Spectrum spec =
            experiments::trial_spectrum(profile, dist, esd_seed, esd_trial);
        const Histogram hist = esd_histogram(spec, esd_bins, esd_range[0], esd_range[1]);
        const double ks = semicircle::ks_distance(spec);

        const fs::path dir = prepare_out_dir(esd_out, esd_cmd);
        {
            std::ofstream os(dir / "histogram.csv");
            os << "bin_left,bin_right,mass\n";
            const double width = (hist.hi - hist.lo) / esd_bins;
            for (int b = 0; b < esd_bins; ++b) {
                os << fmt17(hist.lo + b * width) << ',' << fmt17(hist.lo + (b + 1) * width)
                   << ',' << fmt17(hist.mass[static_cast<std::size_t>(b)]) << '\n';
            }
        }
        {
            std::ofstream os(dir / "law.csv");
            os << "x,density,cdf\n";
            const int grid = 401;
            for (int i = 0; i < grid; ++i) {
                const double x =
                    hist.lo + (hist.hi - hist.lo) * static_cast<double>(i) / (grid - 1);
                os << fmt17(x) << ',' << fmt17(semicircle::density(x)) << ','
                   << fmt17(semicircle::cdf(x)) << '\n';
            }
        }
        nlohmann::json summary;
        summary["n"] = profile.n();
        summary["ks_distance"] = ks;
        summary["mass_below"] = hist.mass_below;
        summary["mass_above"] = hist.mass_above;
        summary["lambda_max"] = spec.lambda_max();
        summary["lambda_min"] = spec.lambda_min();
        write_text_file(dir / "summary.json", summary.dump(2) + "\n");
        std::cout << "ks=" << fmt17(ks) << " out_of_range_mass="
                  << fmt17(hist.mass_below + hist.mass_above) << "\n";
    });

    // ---------------------------------------------------------------- moments
    auto* moments_cmd =
        app.add_subcommand("moments", "exact walk-moment oracle for rooted graphs");
    moments_cmd->set_config("--config");
    std::string moments_graph = "clique";
    int moments_d = 3;
    int moments_depth = 0;
    int moments_length = 6;
    std::string moments_dist = "rademacher";
    std::string moments_out;
    bool moments_table = false;
    int moments_trace_n = 0;
    moments_cmd->add_option("--graph", moments_graph, "clique | tree");
    moments_cmd->add_option("--d", moments_d, "degree");
    moments_cmd->add_option("--depth", moments_depth, "tree depth (default length/2)");
    moments_cmd->add_option("--length", moments_length, "walk length 2k");
    moments_cmd->add_option("--dist", moments_dist, "entry law");
    moments_cmd->add_option("--out", moments_out, "output directory for report.json");
    moments_cmd->add_flag("--table", moments_table, "export the moment table of --dist instead");
    moments_cmd->add_option("--trace-n", moments_trace_n,
                            "run the brute-force trace oracle on a clique-union profile of this n");
    moments_cmd->callback([&] {
        const EntryDistribution dist = EntryDistribution::parse(moments_dist);
        if (moments_table) {
            if (moments_out.empty()) {
                dist.moment_table().write_csv(std::cout);
            } else {
                const fs::path dir = prepare_out_dir(moments_out, moments_cmd);
                std::ofstream os(dir / "moment_table.csv");
                dist.moment_table().write_csv(os);
                std::cout << "wrote moment_table.csv\n";
            }
            return;
        }
        if (moments_trace_n > 0) {
            const VarianceProfile profile = clique_union_profile(moments_trace_n, moments_d);
            const walks::MomentValue mv =
                walks::expected_trace_moment(profile, dist, moments_length);
            std::cout << mv.str() << "\n";
            return;
        }
        walks::RootedGraph graph =
            moments_graph == "tree"
                ? walks::RootedGraph::truncated_tree(
                      moments_d, moments_depth > 0 ? moments_depth : moments_length / 2)
                : walks::RootedGraph::clique(moments_d);
        const walks::WalkMomentReport report =
            walks::local_moment_report(graph, moments_length, dist);
        BigInt dk = 1;
        for (int i = 0; i < moments_length / 2; ++i) dk *= moments_d;
        const std::string moment_str = report.moment_is_exact
                                           ? rational_str(report.moment_exact)
                                           : fmt17(report.moment_value);
        std::cout << moment_str << " (" << report.even_walks << " even walks / " << dk.str()
                  << ")\n";
        if (!moments_out.empty()) {
            const fs::path dir = prepare_out_dir(moments_out, moments_cmd);
            write_text_file(dir / "report.json", report.to_json().dump(2) + "\n");
        }
    });

    // -------------------------------------------------------------------- gap
    auto* gap_cmd = app.add_subcommand("gap", "clique minus tree local moment");
    gap_cmd->set_config("--config");
    int gap_d = 3;
    int gap_length = 6;
    std::string gap_dist = "rademacher";
    gap_cmd->add_option("--d", gap_d, "degree");
    gap_cmd->add_option("--length", gap_length, "walk length 2k");
    gap_cmd->add_option("--dist", gap_dist, "entry law");
    gap_cmd->callback([&] {
        const walks::MomentValue gap =
            walks::moment_gap(gap_d, gap_length, EntryDistribution::parse(gap_dist));
        std::cout << gap.str() << "\n";
    });

    // ------------------------------------------------------------------ sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo experiment harness");
    sweep_cmd->set_config("--config");
    experiments::SweepConfig sweep;
    long delta_oracle_samples = 0;
    std::string sweep_out;
    sweep_cmd->add_option("--mode", sweep.mode, "bulk | absence | presence | moment")
        ->default_val("bulk");
    sweep_cmd->add_option("--profile", sweep.profile, "full | clique | band | regular")
        ->default_val("full");
    sweep_cmd->add_option("--dist", sweep.dist, "entry law")->default_val("gaussian");
    sweep_cmd->add_option("--n", sweep.n_list, "dimensions, comma separated")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--d-rule", sweep.d_rule, "fixed | log2")->default_val("fixed");
    sweep_cmd->add_option("--d", sweep.d, "fixed degree / band half-width");
    sweep_cmd->add_option("--trials", sweep.trials, "trials per dimension")->default_val(1);
    sweep_cmd->add_option("--length", sweep.length, "moment mode: even power 2k")
        ->default_val(6);
    sweep_cmd->add_option("--delta", sweep.delta, "outlier margin")->default_val(0.1);
    sweep_cmd->add_option("--epsilon", sweep.epsilon, "per-block tail diagnostic epsilon");
    sweep_cmd->add_option("--seed", sweep.master_seed, "master seed")->default_val(1);
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads")->default_val(1);
    sweep_cmd->add_option("--norm-mode", sweep.norm_mode, "auto | dense | lanczos")
        ->default_val("auto");
    sweep_cmd->add_flag("--timings", sweep.timings, "record per-row wall time in the CSV");
    sweep_cmd->add_option("--delta-oracle", delta_oracle_samples,
                          "presence mode: derive delta from this many oracle block samples");
    sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
    sweep_cmd->callback([&] {
        const fs::path dir = prepare_out_dir(sweep_out, sweep_cmd);
        nlohmann::json summary;
        if (sweep.mode == "moment") {
            const auto result = experiments::run_moment_convergence(sweep);
            std::ofstream os(dir / "results.csv");
            result.write_csv(os);
            summary = result.summary_json();
        } else {
            if (sweep.mode == "presence" && delta_oracle_samples > 0) {
                const int d = experiments::resolve_degree(sweep, sweep.n_list.front());
                const long blocks = sweep.n_list.front() / (d + 1);
                const double tail_prob = std::log(1000.0) / static_cast<double>(blocks);
                const auto oracle = experiments::per_block_tail_oracle(
                    d, EntryDistribution::parse(sweep.dist), delta_oracle_samples, tail_prob,
                    sweep.master_seed ^ 0xde17a, sweep.threads);
                sweep.delta = oracle.delta;
                summary["delta_oracle"] = {{"d", oracle.d},
                                           {"samples", oracle.samples},
                                           {"tail_prob", oracle.tail_prob},
                                           {"quantile", oracle.quantile},
                                           {"delta", oracle.delta}};
                std::cout << "delta oracle: quantile=" << fmt17(oracle.quantile)
                          << " delta=" << fmt17(oracle.delta) << "\n";
            }
            experiments::SweepResult result;
            if (sweep.mode == "bulk") {
                result = experiments::run_bulk_convergence(sweep);
            } else if (sweep.mode == "absence") {
                result = experiments::run_absence_sweep(sweep);
            } else if (sweep.mode == "presence") {
                result = experiments::run_presence_experiment(sweep);
            } else {
                throw CLI::ValidationError("sweep", "unknown mode '" + sweep.mode + "'");
            }
            std::ofstream os(dir / "results.csv");
            result.write_csv(os);
            summary.update(result.summary_json());
        }
        write_text_file(dir / "summary.json", summary.dump(2) + "\n");
        std::cout << "wrote results.csv and summary.json to " << dir.string() << "\n";
    });

    // ----------------------------------------------------------------- verify
    auto* verify_cmd = app.add_subcommand("verify", "golden-value self checks");
    verify_cmd->callback([&] { exit_code = verify_golden_suite(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
