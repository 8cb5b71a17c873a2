#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmtlab/errors.hpp"
#include "rmtlab/rational.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

enum class TailClass { sub_gaussian, heavy_tailed };
enum class Provenance { closed_form, quadrature };

struct MomentTable {
    std::vector<double> values;  // E[xi^k] for k = 0..k_max
    std::vector<Provenance> provenance;

    int k_max() const { return static_cast<int>(values.size()) - 1; }
    void write_csv(std::ostream& os) const;
};

// A centered symmetric entry law. Primitive families are normalized to unit
// variance; truncated variants keep the base scale and record their actual
// variance. Truncation is represented as a mask: the law of xi*1{lo < |xi| <= hi},
// so repeated truncation stays closed under the same type.
class EntryDistribution {
public:
    static constexpr int kMaxMomentOrder = 20;

    enum class Family { gaussian, rademacher, uniform_sym, weibull_sym };

    static EntryDistribution gaussian();
    static EntryDistribution rademacher();
    static EntryDistribution uniform_sym();
    static EntryDistribution weibull_sym(double beta);  // beta in [0.5, 4]

    // CLI names: gaussian | rademacher | uniform | weibull:<beta>
    static EntryDistribution parse(const std::string& name);

    Family family() const { return family_; }
    TailClass tail_class() const { return tail_class_; }
    const std::string& name() const { return name_; }
    double beta() const { return beta_; }
    bool truncated() const { return mask_lo_ > 0.0 || std::isfinite(mask_hi_); }
    bool is_zero_law() const;

    double sample(Stream& rng) const;

    // E[xi^k], exact or quadrature per the table's provenance.
    double moment(int k) const;  // throws OrderTooLarge for k outside 0..20
    std::optional<Rational> exact_moment(int k) const;
    const MomentTable& moment_table() const { return table_; }

    double variance() const { return table_.values[2]; }

    // Anti-concentration constant: largest grid value rho in {0.01..0.99} with
    // P(xi >= rho) >= rho (symmetric law, so both tails agree). Zero when no
    // grid value qualifies.
    double rho() const { return rho_; }

    // P(xi >= t) for t > 0, from the analytic tail of the base law.
    double upper_tail(double t) const;

    // Split into (xi*1{|xi|<=L}, xi*1{|xi|>L}); neither part is recentered or
    // renormalized. The recorded variances sum to the variance of *this.
    std::pair<EntryDistribution, EntryDistribution> truncate(double L) const;

private:
    EntryDistribution(Family f, double beta, double mask_lo, double mask_hi);

    double mass_below(int k, double x) const;  // E[xi^k 1{|xi| <= x}] of the base law

    Family family_;
    double beta_ = 0.0;    // weibull shape exponent
    double lambda_ = 0.0;  // weibull scale for unit variance
    double mask_lo_ = 0.0;
    double mask_hi_ = 0.0;  // +inf when untruncated
    TailClass tail_class_ = TailClass::sub_gaussian;
    std::string name_;
    MomentTable table_;
    double rho_ = 0.0;
};

// Empirical version of the rho scan: largest grid value with both empirical
// tails at least rho. Throws NoValidRho when even rho = 0.01 fails.
double estimate_rho(const EntryDistribution& dist, long trials, Stream& rng);

}  // namespace rmtlab
