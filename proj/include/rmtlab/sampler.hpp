#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmtlab/entries.hpp"
#include "rmtlab/profiles.hpp"

namespace rmtlab {

// One realization of X = Sigma o W, stored dense and exactly symmetric.
struct MatrixSample {
    int n = 0;
    std::vector<double> values;  // row-major
    std::string profile_ref;
    std::string dist_ref;
    std::uint64_t master_seed = 0;
    std::int64_t trial_index = 0;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
    double trace() const;
    double frobenius_sq() const;
};

// Largest dense dimension the sampler will materialize.
inline constexpr int kDenseLimit = 8192;

// Rank of (i, j), i <= j, in the row-major upper triangle of an n x n matrix.
// Seed derivation keys on this rank, so any tiling of the triangle produces
// identical entries.
std::uint64_t entry_rank(int n, int i, int j);

// Deterministic in (profile, dist, master_seed, trial_index) regardless of the
// thread count.
MatrixSample sample_matrix(const VarianceProfile& profile, const EntryDistribution& dist,
                           std::uint64_t master_seed, std::int64_t trial_index,
                           int threads = 1);

// One diagonal block of a clique-union sample, bit-identical to the same block
// of the full matrix, without materializing X.
MatrixSample sample_block(const VarianceProfile& profile, const EntryDistribution& dist,
                          std::uint64_t master_seed, std::int64_t trial_index, int block);

void write_matrix_csv(const MatrixSample& sample, std::ostream& os);
void write_matrix_coo(const MatrixSample& sample, std::ostream& os);

}  // namespace rmtlab
