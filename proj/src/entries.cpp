#include "rmtlab/entries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "rmtlab/quadrature.hpp"

namespace rmtlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt3 = std::sqrt(3.0);

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// (k-1)!! for even k >= 0
double double_factorial_odd(int k) {
    double v = 1.0;
    for (int j = k - 1; j >= 1; j -= 2) v *= j;
    return v;
}

std::string format_scalar(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

void MomentTable::write_csv(std::ostream& os) const {
    os << "k,value,provenance\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", values[k]);
        os << k << ',' << buf << ','
           << (provenance[k] == Provenance::closed_form ? "closed_form" : "quadrature")
           << '\n';
    }
}

EntryDistribution EntryDistribution::gaussian() {
    return EntryDistribution(Family::gaussian, 0.0, 0.0, kInf);
}

EntryDistribution EntryDistribution::rademacher() {
    return EntryDistribution(Family::rademacher, 0.0, 0.0, kInf);
}

EntryDistribution EntryDistribution::uniform_sym() {
    return EntryDistribution(Family::uniform_sym, 0.0, 0.0, kInf);
}

EntryDistribution EntryDistribution::weibull_sym(double beta) {
    if (!(beta >= 0.5 && beta <= 4.0)) {
        throw std::invalid_argument("weibull_sym: beta must lie in [0.5, 4]");
    }
    return EntryDistribution(Family::weibull_sym, beta, 0.0, kInf);
}

EntryDistribution EntryDistribution::parse(const std::string& name) {
    if (name == "gaussian") return gaussian();
    if (name == "rademacher") return rademacher();
    if (name == "uniform") return uniform_sym();
    if (name.rfind("weibull:", 0) == 0) {
        return weibull_sym(std::stod(name.substr(8)));
    }
    throw std::invalid_argument("unknown distribution '" + name +
                                "' (expected gaussian | rademacher | uniform | weibull:<beta>)");
}

EntryDistribution::EntryDistribution(Family f, double beta, double mask_lo, double mask_hi)
    : family_(f), beta_(beta), mask_lo_(mask_lo), mask_hi_(mask_hi) {
    if (family_ == Family::weibull_sym) {
        // scale so the untruncated law has unit variance: E xi^2 = lambda^2 Gamma(1+2b)
        lambda_ = std::exp(-0.5 * std::lgamma(1.0 + 2.0 * beta_));
    }

    switch (family_) {
        case Family::gaussian: name_ = "gaussian"; break;
        case Family::rademacher: name_ = "rademacher"; break;
        case Family::uniform_sym: name_ = "uniform"; break;
        case Family::weibull_sym: name_ = "weibull:" + format_scalar(beta_); break;
    }
    if (mask_lo_ > 0.0 && std::isfinite(mask_hi_)) {
        name_ += "[" + format_scalar(mask_lo_) + "<|x|<=" + format_scalar(mask_hi_) + "]";
    } else if (mask_lo_ > 0.0) {
        name_ += "[|x|>" + format_scalar(mask_lo_) + "]";
    } else if (std::isfinite(mask_hi_)) {
        name_ += "[|x|<=" + format_scalar(mask_hi_) + "]";
    }

    if (std::isfinite(mask_hi_)) {
        tail_class_ = TailClass::sub_gaussian;  // bounded support
    } else {
        tail_class_ = (family_ == Family::weibull_sym && beta_ > 0.5)
                          ? TailClass::heavy_tailed
                          : TailClass::sub_gaussian;
    }

    table_.values.resize(kMaxMomentOrder + 1, 0.0);
    table_.provenance.resize(kMaxMomentOrder + 1, Provenance::closed_form);
    table_.values[0] = 1.0;
    const bool weibull_quadrature =
        family_ == Family::weibull_sym && (mask_lo_ > 0.0 || std::isfinite(mask_hi_));
    for (int k = 1; k <= kMaxMomentOrder; ++k) {
        if (k % 2 == 1) continue;  // symmetric law
        table_.values[k] = mass_below(k, mask_hi_) - mass_below(k, mask_lo_);
        if (weibull_quadrature) table_.provenance[k] = Provenance::quadrature;
    }

    for (int i = 99; i >= 1; --i) {
        const double t = i / 100.0;
        if (upper_tail(t) >= t) {
            rho_ = t;
            break;
        }
    }
}

bool EntryDistribution::is_zero_law() const {
    if (mask_lo_ >= mask_hi_) return true;
    switch (family_) {
        case Family::rademacher: return !(mask_lo_ < 1.0 && 1.0 <= mask_hi_);
        case Family::uniform_sym: return mask_lo_ >= kSqrt3;
        default: return false;
    }
}

double EntryDistribution::mass_below(int k, double x) const {
    if (x <= 0.0) return 0.0;
    if (k % 2 == 1) return 0.0;
    switch (family_) {
        case Family::rademacher:
            return x >= 1.0 ? 1.0 : 0.0;
        case Family::uniform_sym: {
            const double c = std::min(x, kSqrt3);
            return std::pow(c, k + 1) / (kSqrt3 * (k + 1));
        }
        case Family::gaussian: {
            if (std::isinf(x)) return k == 0 ? 1.0 : double_factorial_odd(k);
            // I_k(x) = (k-1) I_{k-2}(x) - 2 x^{k-1} phi(x), I_0(x) = erf(x/sqrt2)
            double prev = std::erf(x / std::sqrt(2.0));
            if (k == 0) return prev;
            for (int j = 2; j <= k; j += 2) {
                prev = (j - 1) * prev - 2.0 * std::pow(x, j - 1) * normal_pdf(x);
            }
            return prev;
        }
        case Family::weibull_sym: {
            // |xi| = lambda * W^beta with W ~ Exp(1):
            // E[xi^k 1{|xi|<=x}] = lambda^k * int_0^T t^{k beta} e^-t dt, T = (x/lambda)^(1/beta)
            const double kb = k * beta_;
            const double lg = std::lgamma(1.0 + kb);
            const double full = std::exp(k * std::log(lambda_) + lg);
            if (std::isinf(x)) return full;
            const double T = std::pow(x / lambda_, 1.0 / beta_);
            const double upper = std::min(T, kb + 60.0 * std::sqrt(kb + 1.0) + 60.0);
            // integrate the gamma-normalized integrand, which is bounded by
            // one, over geometrically growing panels so the peak at t = k*beta
            // is always resolved
            auto regularized_density = [kb, lg](double t) {
                if (t <= 0.0) return kb == 0.0 ? std::exp(-t) : 0.0;
                return std::exp(kb * std::log(t) - t - lg);
            };
            double acc = 0.0;
            double lo = 0.0;
            for (double hi = 1.0; lo < upper; hi *= 2.0) {
                const double end = std::min(hi, upper);
                if (end > lo) acc += adaptive_simpson(regularized_density, lo, end, 1e-14);
                lo = end;
            }
            return full * acc;
        }
    }
    return 0.0;
}

double EntryDistribution::sample(Stream& rng) const {
    double x = 0.0;
    switch (family_) {
        case Family::gaussian: x = rng.next_gaussian(); break;
        case Family::rademacher: x = rng.next_sign(); break;
        case Family::uniform_sym: x = (2.0 * rng.next_unit() - 1.0) * kSqrt3; break;
        case Family::weibull_sym: {
            const double s = rng.next_sign();
            x = s * lambda_ * std::pow(-std::log(rng.next_unit()), beta_);
            break;
        }
    }
    const double a = std::fabs(x);
    if (a <= mask_lo_ || a > mask_hi_) return 0.0;
    return x;
}

double EntryDistribution::moment(int k) const {
    if (k < 0 || k > kMaxMomentOrder) {
        throw OrderTooLarge("moment order " + std::to_string(k) + " outside 0.." +
                            std::to_string(kMaxMomentOrder));
    }
    return table_.values[k];
}

std::optional<Rational> EntryDistribution::exact_moment(int k) const {
    if (k < 0 || k > kMaxMomentOrder) {
        throw OrderTooLarge("moment order " + std::to_string(k) + " outside 0.." +
                            std::to_string(kMaxMomentOrder));
    }
    if (k == 0) return Rational(1);
    if (k % 2 == 1) return Rational(0);
    if (family_ == Family::rademacher) {
        // truncation keeps or removes the whole {-1,+1} support
        const bool keeps = mask_lo_ < 1.0 && 1.0 <= mask_hi_;
        return Rational(keeps ? 1 : 0);
    }
    const bool unmasked = mask_lo_ == 0.0 && std::isinf(mask_hi_);
    switch (family_) {
        case Family::gaussian: {
            if (!unmasked) return std::nullopt;
            BigInt v = 1;
            for (int j = k - 1; j >= 1; j -= 2) v *= j;
            return Rational(v);
        }
        case Family::uniform_sym: {
            if (!(mask_lo_ == 0.0 && mask_hi_ >= kSqrt3)) return std::nullopt;
            BigInt num = 1;
            for (int j = 0; j < k / 2; ++j) num *= 3;
            return Rational(num, BigInt(k + 1));
        }
        default:
            return std::nullopt;
    }
}

double EntryDistribution::upper_tail(double t) const {
    if (t <= 0.0) throw std::invalid_argument("upper_tail: t must be positive");
    if (family_ == Family::rademacher) {
        const bool keeps = mask_lo_ < 1.0 && 1.0 <= mask_hi_;
        return (keeps && t <= 1.0) ? 0.5 : 0.0;
    }
    auto base_tail = [this](double x) -> double {
        if (std::isinf(x)) return 0.0;
        switch (family_) {
            case Family::gaussian: return 0.5 * std::erfc(x / std::sqrt(2.0));
            case Family::uniform_sym:
                return x >= kSqrt3 ? 0.0 : (kSqrt3 - x) / (2.0 * kSqrt3);
            case Family::weibull_sym:
                return 0.5 * std::exp(-std::pow(x / lambda_, 1.0 / beta_));
            default: return 0.0;
        }
    };
    const double v = base_tail(std::max(t, mask_lo_)) - base_tail(mask_hi_);
    return std::max(v, 0.0);
}

std::pair<EntryDistribution, EntryDistribution> EntryDistribution::truncate(double L) const {
    if (!(L > 0.0)) throw std::invalid_argument("truncate: L must be positive");
    EntryDistribution low(family_, beta_, mask_lo_, std::min(mask_hi_, L));
    EntryDistribution high(family_, beta_, std::max(mask_lo_, L), mask_hi_);
    return {low, high};
}

double estimate_rho(const EntryDistribution& dist, long trials, Stream& rng) {
    if (trials < 10000) throw std::invalid_argument("estimate_rho: need at least 1e4 trials");
    std::vector<double> draws(static_cast<std::size_t>(trials));
    for (auto& x : draws) x = dist.sample(rng);
    std::sort(draws.begin(), draws.end());
    const double inv = 1.0 / static_cast<double>(trials);
    for (int i = 99; i >= 1; --i) {
        const double t = i / 100.0;
        const auto ge = draws.end() - std::lower_bound(draws.begin(), draws.end(), t);
        const auto le = std::upper_bound(draws.begin(), draws.end(), -t) - draws.begin();
        const double p_plus = static_cast<double>(ge) * inv;
        const double p_minus = static_cast<double>(le) * inv;
        if (p_plus >= t && p_minus >= t) return t;
    }
    throw NoValidRho("no grid value rho in {0.01..0.99} satisfies both tail bounds for " +
                     dist.name());
}

}  // namespace rmtlab
