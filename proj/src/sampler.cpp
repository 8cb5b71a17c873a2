#include "rmtlab/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "rmtlab/parallel.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double MatrixSample::trace() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += at(i, i);
    return t;
}

double MatrixSample::frobenius_sq() const {
    double f = 0.0;
    for (double v : values) f += v * v;
    return f;
}

std::uint64_t entry_rank(int n, int i, int j) {
    const std::uint64_t un = n, ui = i, uj = j;
    return ui * un - ui * (ui - 1) / 2 + (uj - ui);
}

MatrixSample sample_matrix(const VarianceProfile& profile, const EntryDistribution& dist,
                           std::uint64_t master_seed, std::int64_t trial_index, int threads) {
    const int n = profile.n();
    if (n > kDenseLimit) {
        throw InvalidProfile("sample_matrix: n exceeds dense limit " +
                             std::to_string(kDenseLimit) + "; use block sampling");
    }
    if (profile.kind() == VarianceProfile::Kind::custom) {
        const ValidationReport report = validate(profile);
        if (!report.passes()) {
            throw InvalidProfile("sample_matrix: profile fails validation: " + report.summary());
        }
    }

    MatrixSample sample;
    sample.n = n;
    sample.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    sample.profile_ref = profile.describe();
    sample.dist_ref = dist.name();
    sample.master_seed = master_seed;
    sample.trial_index = trial_index;

    const std::uint64_t trial = static_cast<std::uint64_t>(trial_index);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
        const int i = static_cast<int>(row);
        for (int j : profile.row_support_upper(i)) {
            Stream rng = derive_stream(master_seed, trial, entry_rank(n, i, j));
            const double x = profile.entry(i, j) * dist.sample(rng);
            sample.values[static_cast<std::size_t>(i) * n + j] = x;
            sample.values[static_cast<std::size_t>(j) * n + i] = x;
        }
    });
    return sample;
}

MatrixSample sample_block(const VarianceProfile& profile, const EntryDistribution& dist,
                          std::uint64_t master_seed, std::int64_t trial_index, int block) {
    if (!profile.block_diagonal()) {
        throw InvalidProfile("sample_block: profile is not block-diagonal");
    }
    if (block < 0 || block >= profile.block_count()) {
        throw std::invalid_argument("sample_block: block index out of range");
    }
    const int m = profile.block_size();
    const int offset = block * m;
    const int n = profile.n();
    const double sigma = profile.sigma_star();

    MatrixSample sample;
    sample.n = m;
    sample.values.assign(static_cast<std::size_t>(m) * m, 0.0);
    sample.profile_ref = profile.describe() + "#block" + std::to_string(block);
    sample.dist_ref = dist.name();
    sample.master_seed = master_seed;
    sample.trial_index = trial_index;

    const std::uint64_t trial = static_cast<std::uint64_t>(trial_index);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            Stream rng = derive_stream(master_seed, trial, entry_rank(n, offset + i, offset + j));
            const double x = sigma * dist.sample(rng);
            sample.values[static_cast<std::size_t>(i) * m + j] = x;
            sample.values[static_cast<std::size_t>(j) * m + i] = x;
        }
    }
    return sample;
}

void write_matrix_csv(const MatrixSample& sample, std::ostream& os) {
    for (int i = 0; i < sample.n; ++i) {
        for (int j = 0; j < sample.n; ++j) {
            if (j) os << ',';
            os << fmt17(sample.at(i, j));
        }
        os << '\n';
    }
}

void write_matrix_coo(const MatrixSample& sample, std::ostream& os) {
    os << "i,j,value\n";
    for (int i = 0; i < sample.n; ++i) {
        for (int j = i; j < sample.n; ++j) {
            const double v = sample.at(i, j);
            if (v != 0.0) os << i << ',' << j << ',' << fmt17(v) << '\n';
        }
    }
}

}  // namespace rmtlab
