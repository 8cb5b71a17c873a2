#include "rmtlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmtlab/rng.hpp"

namespace rmtlab {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << (passes() ? "PASS" : "FAIL")
       << " row_sum_dev=" << max_row_sum_deviation
       << " asymmetry=" << max_asymmetry
       << " min_entry=" << min_entry
       << " sigma_star_err=" << sigma_star_error;
    return os.str();
}

RegularGraph random_regular_graph(int n, int d, std::uint64_t seed, int max_restarts) {
    if (n <= 0 || d <= 0) throw InvalidDegree("random_regular_graph: n, d must be positive");
    if (d >= n) throw InvalidDegree("random_regular_graph: need d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0) {
        throw InvalidDegree("random_regular_graph: n*d must be even");
    }

    const int stubs = n * d;
    std::vector<int> pairing(stubs);
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        Stream rng = derive_stream(seed, static_cast<std::uint64_t>(attempt), 0);
        std::iota(pairing.begin(), pairing.end(), 0);
        // Fisher-Yates, then match consecutive stubs
        for (int i = stubs - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
            std::swap(pairing[i], pairing[j]);
        }
        std::vector<std::set<int>> adj(n);
        bool simple = true;
        for (int i = 0; i + 1 < stubs && simple; i += 2) {
            const int u = pairing[i] / d;
            const int v = pairing[i + 1] / d;
            if (u == v || adj[u].count(v)) {
                simple = false;
            } else {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        if (!simple) continue;
        RegularGraph g{n, d, {}};
        g.adjacency.reserve(n);
        for (int v = 0; v < n; ++v) g.adjacency.emplace_back(adj[v].begin(), adj[v].end());
        return g;
    }
    throw GenerationFailure("random_regular_graph: no simple graph within " +
                            std::to_string(max_restarts) + " restarts (n=" + std::to_string(n) +
                            ", d=" + std::to_string(d) + ")");
}

VarianceProfile full_wigner_profile(int n) {
    if (n < 1) throw DimensionMismatch("full_wigner_profile: n must be >= 1");
    VarianceProfile p;
    p.kind_ = VarianceProfile::Kind::full;
    p.n_ = n;
    p.includes_diagonal_ = true;
    p.value_ = 1.0 / std::sqrt(static_cast<double>(n));
    p.sigma_star_ = p.value_;
    return p;
}

VarianceProfile clique_union_profile(int n, int d) {
    if (d < 2) throw InvalidDegree("clique_union_profile: d must be >= 2");
    if (n < 1 || n % (d + 1) != 0) {
        throw DimensionMismatch("clique_union_profile: (d+1) must divide n (n=" +
                                std::to_string(n) + ", d=" + std::to_string(d) + ")");
    }
    VarianceProfile p;
    p.kind_ = VarianceProfile::Kind::clique_union;
    p.n_ = n;
    p.d_ = d;
    p.includes_diagonal_ = false;
    p.value_ = 1.0 / std::sqrt(static_cast<double>(d));
    p.sigma_star_ = p.value_;
    return p;
}

VarianceProfile band_profile(int n, int w) {
    if (w < 1 || 2 * w > n - 1) {
        throw InvalidBandwidth("band_profile: need 1 <= w <= (n-1)/2 (n=" + std::to_string(n) +
                               ", w=" + std::to_string(w) + ")");
    }
    VarianceProfile p;
    p.kind_ = VarianceProfile::Kind::band;
    p.n_ = n;
    p.w_ = w;
    p.includes_diagonal_ = false;
    p.value_ = 1.0 / std::sqrt(2.0 * w);
    p.sigma_star_ = p.value_;
    return p;
}

VarianceProfile random_regular_profile(int n, int d, std::uint64_t seed, int max_restarts) {
    RegularGraph g = random_regular_graph(n, d, seed, max_restarts);
    VarianceProfile p;
    p.kind_ = VarianceProfile::Kind::random_regular;
    p.n_ = n;
    p.d_ = d;
    p.seed_ = seed;
    p.includes_diagonal_ = false;
    p.value_ = 1.0 / std::sqrt(static_cast<double>(d));
    p.sigma_star_ = p.value_;
    p.adj_ = std::move(g.adjacency);
    return p;
}

VarianceProfile VarianceProfile::custom(int n, std::vector<double> entries,
                                        bool includes_diagonal) {
    if (n < 1 || entries.size() != static_cast<std::size_t>(n) * n) {
        throw DimensionMismatch("custom profile: entries must be n*n");
    }
    VarianceProfile p;
    p.kind_ = Kind::custom;
    p.n_ = n;
    p.includes_diagonal_ = includes_diagonal;
    p.dense_ = std::move(entries);
    p.sigma_star_ = *std::max_element(p.dense_.begin(), p.dense_.end());
    return p;
}

std::string VarianceProfile::kind_name() const {
    switch (kind_) {
        case Kind::full: return "full";
        case Kind::clique_union: return "clique_union";
        case Kind::band: return "band";
        case Kind::random_regular: return "random_regular";
        case Kind::custom: return "custom";
    }
    return "?";
}

std::string VarianceProfile::describe() const {
    std::ostringstream os;
    os << kind_name() << "(n=" << n_;
    if (kind_ == Kind::clique_union || kind_ == Kind::random_regular) os << ",d=" << d_;
    if (kind_ == Kind::band) os << ",w=" << w_;
    if (kind_ == Kind::random_regular) os << ",seed=" << seed_;
    os << ")";
    return os.str();
}

double VarianceProfile::entry(int i, int j) const {
    switch (kind_) {
        case Kind::full:
            return value_;
        case Kind::clique_union:
            return (i != j && i / (d_ + 1) == j / (d_ + 1)) ? value_ : 0.0;
        case Kind::band: {
            const int diff = std::abs(i - j);
            const int circ = std::min(diff, n_ - diff);
            return (circ >= 1 && circ <= w_) ? value_ : 0.0;
        }
        case Kind::random_regular:
            return std::binary_search(adj_[i].begin(), adj_[i].end(), j) ? value_ : 0.0;
        case Kind::custom:
            return dense_[static_cast<std::size_t>(i) * n_ + j];
    }
    return 0.0;
}

std::optional<Rational> VarianceProfile::uniform_entry_sq() const {
    switch (kind_) {
        case Kind::full: return Rational(1, n_);
        case Kind::clique_union: return Rational(1, d_);
        case Kind::band: return Rational(1, 2 * w_);
        case Kind::random_regular: return Rational(1, d_);
        case Kind::custom: return std::nullopt;
    }
    return std::nullopt;
}

std::vector<int> VarianceProfile::row_support_upper(int i) const {
    std::vector<int> out;
    switch (kind_) {
        case Kind::full:
            out.reserve(n_ - i);
            for (int j = i; j < n_; ++j) out.push_back(j);
            break;
        case Kind::clique_union: {
            const int hi = (i / (d_ + 1) + 1) * (d_ + 1);
            for (int j = i + 1; j < hi; ++j) out.push_back(j);
            break;
        }
        case Kind::band:
            for (int j = i + 1; j < n_; ++j) {
                if (entry(i, j) > 0.0) out.push_back(j);
            }
            break;
        case Kind::random_regular:
            for (int j : adj_[i]) {
                if (j > i) out.push_back(j);
            }
            break;
        case Kind::custom:
            for (int j = i; j < n_; ++j) {
                if (entry(i, j) != 0.0) out.push_back(j);
            }
            break;
    }
    return out;
}

std::vector<int> VarianceProfile::support_neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n_; ++j) {
        if (entry(i, j) != 0.0) out.push_back(j);
    }
    return out;
}

nlohmann::json VarianceProfile::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["kind"] = kind_name();
    if (kind_ == Kind::clique_union || kind_ == Kind::random_regular) j["d"] = d_;
    if (kind_ == Kind::band) j["w"] = w_;
    if (kind_ == Kind::random_regular) j["seed"] = seed_;
    j["includes_diagonal"] = includes_diagonal_;
    j["sigma_star"] = sigma_star_;
    return j;
}

void VarianceProfile::write_entries_csv(std::ostream& os) const {
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (j) os << ',';
            os << fmt17(entry(i, j));
        }
        os << '\n';
    }
}

ValidationReport validate(const VarianceProfile& profile) {
    ValidationReport report;
    report.min_entry = 0.0;
    double max_entry = 0.0;
    const int n = profile.n();
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = profile.entry(i, j);
            row_sum += s * s;
            report.min_entry = std::min(report.min_entry, s);
            max_entry = std::max(max_entry, s);
            if (j > i) {
                report.max_asymmetry =
                    std::max(report.max_asymmetry, std::fabs(s - profile.entry(j, i)));
            }
        }
        report.max_row_sum_deviation =
            std::max(report.max_row_sum_deviation, std::fabs(row_sum - 1.0));
    }
    report.sigma_star_error = std::fabs(max_entry - profile.sigma_star());
    return report;
}

}  // namespace rmtlab
