#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rmtlab {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: the counter walks a Weyl sequence and every output is
// the mix of the current counter, so a stream is a pure function of its root.
class Stream {
public:
    explicit Stream(std::uint64_t root) : counter_(root) {}

    std::uint64_t next_u64() {
        counter_ += kGoldenGamma;
        return mix64(counter_);
    }

    // uniform on the open interval (0,1); never returns 0, safe under log()
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Absorb (master_seed, trial, entry) into a stream root. Distinct triples give
// statistically independent streams; identical triples replay exactly.
inline std::uint64_t stream_root(std::uint64_t master_seed,
                                 std::uint64_t trial_index,
                                 std::uint64_t entry_index) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    h = mix64(h ^ master_seed);
    h = mix64(h ^ trial_index);
    h = mix64(h ^ entry_index);
    return h;
}

inline Stream derive_stream(std::uint64_t master_seed,
                            std::uint64_t trial_index,
                            std::uint64_t entry_index) {
    return Stream(stream_root(master_seed, trial_index, entry_index));
}

}  // namespace rmtlab
