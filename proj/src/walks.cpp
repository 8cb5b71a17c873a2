#include "rmtlab/walks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rmtlab::walks {

namespace {

constexpr std::uint64_t kWalkBudget = 100'000'000;       // closed walks per enumeration
constexpr std::uint64_t kTraceWalkBudget = 200'000'000;  // closed walks, all roots
constexpr int kTreeVertexCap = 5'000'000;

std::uint64_t edge_key(int u, int v) {
    const std::uint64_t a = static_cast<std::uint64_t>(std::min(u, v));
    const std::uint64_t b = static_cast<std::uint64_t>(std::max(u, v));
    return (a << 32) | b;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Edge-multiplicity stack. Pushes and pops follow the DFS, so a multiplicity
// that returns to zero always sits at the back.
using EdgeStack = std::vector<std::pair<std::uint64_t, int>>;

void push_edge(EdgeStack& edges, std::uint64_t key) {
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        if (it->first == key) {
            ++it->second;
            return;
        }
    }
    edges.emplace_back(key, 1);
}

void pop_edge(EdgeStack& edges, std::uint64_t key) {
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        if (it->first == key) {
            if (--it->second == 0) edges.pop_back();
            return;
        }
    }
}

// Closed-walk count from one root by repeated matrix-vector products.
// Exact while counts stay below 2^53.
double closed_walk_count(const std::vector<std::vector<int>>& adj, int root, int length) {
    const std::size_t n = adj.size();
    std::vector<double> x(n, 0.0);
    std::vector<double> y(n);
    x[static_cast<std::size_t>(root)] = 1.0;
    for (int t = 0; t < length; ++t) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            const double xv = x[v];
            if (xv == 0.0) continue;
            for (int u : adj[v]) y[static_cast<std::size_t>(u)] += xv;
        }
        x.swap(y);
    }
    return x[static_cast<std::size_t>(root)];
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int root) {
    std::vector<int> dist(adj.size(), std::numeric_limits<int>::max() / 2);
    std::queue<int> queue;
    dist[static_cast<std::size_t>(root)] = 0;
    queue.push(root);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(u)] > dist[static_cast<std::size_t>(v)] + 1) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push(u);
            }
        }
    }
    return dist;
}

using ProfileCounts = std::map<std::vector<int>, std::uint64_t>;

// DFS over closed walks, grouping by edge-multiplicity profile. Walks that
// cannot return to the root in the remaining steps are pruned by distance.
struct WalkEnum {
    const std::vector<std::vector<int>>* adj = nullptr;
    const int* dist = nullptr;
    int root = 0;
    int length = 0;
    EdgeStack edges;
    ProfileCounts profiles;
    std::vector<int> buf;

    void record() {
        buf.clear();
        for (const auto& [key, mult] : edges) buf.push_back(mult);
        std::sort(buf.begin(), buf.end(), std::greater<>());
        ++profiles[buf];
    }

    void dfs(int v, int t) {
        if (t == length) {
            if (v == root) record();
            return;
        }
        const int remaining = length - t - 1;
        for (int u : (*adj)[static_cast<std::size_t>(v)]) {
            if (dist[u] > remaining) continue;
            const std::uint64_t key = edge_key(v, u);
            push_edge(edges, key);
            dfs(u, t + 1);
            pop_edge(edges, key);
        }
    }
};

struct MomentAccumulator {
    bool exact = true;
    Rational rational_sum = 0;
    double real_sum = 0.0;

    // add count * prod_m E[xi^m] for one multiplicity profile
    void add(const std::vector<int>& mults, std::uint64_t count, const EntryDistribution& dist) {
        double real_term = static_cast<double>(count);
        for (int m : mults) real_term *= dist.moment(m);
        real_sum += real_term;
        if (!exact) return;
        Rational term(count);
        for (int m : mults) {
            const auto em = dist.exact_moment(m);
            if (!em) {
                exact = false;
                return;
            }
            term *= *em;
        }
        rational_sum += term;
    }
};

WalkMomentReport build_report(const RootedGraph& graph, int length, const ProfileCounts& profiles,
                              const EntryDistribution* dist) {
    WalkMomentReport report;
    report.graph = graph.label();
    report.length = length;
    for (const auto& [mults, count] : profiles) {
        report.total_walks += count;
        const bool all_even =
            std::all_of(mults.begin(), mults.end(), [](int m) { return m % 2 == 0; });
        if (all_even) report.even_walks += count;
        report.shapes.push_back({mults, count});
    }
    if (dist != nullptr) {
        MomentAccumulator acc;
        for (const auto& [mults, count] : profiles) acc.add(mults, count, *dist);
        const int k = length / 2;
        report.has_moment = true;
        report.moment_is_exact = acc.exact;
        if (acc.exact) {
            Rational denom = 1;
            for (int i = 0; i < k; ++i) denom *= graph.degree();
            report.moment_exact = acc.rational_sum / denom;
            report.moment_value = static_cast<double>(report.moment_exact);
        } else {
            report.moment_value = acc.real_sum / std::pow(static_cast<double>(graph.degree()), k);
        }
    }
    return report;
}

ProfileCounts enumerate_profiles(const RootedGraph& graph, int length) {
    if (length <= 0 || length % 2 != 0) {
        throw LengthOdd("walk enumeration: length must be a positive even integer");
    }
    if (length > 12) throw BudgetExceeded("walk enumeration: length capped at 12");
    std::vector<std::vector<int>> adj;
    adj.reserve(graph.vertex_count());
    for (int v = 0; v < graph.vertex_count(); ++v) adj.push_back(graph.neighbors(v));
    const double estimate = closed_walk_count(adj, graph.root(), length);
    if (estimate > static_cast<double>(kWalkBudget)) {
        throw BudgetExceeded("walk enumeration: " + fmt17(estimate) +
                             " closed walks exceed budget " + std::to_string(kWalkBudget));
    }
    const std::vector<int> dist = graph.distances_from_root();
    WalkEnum walker;
    walker.adj = &adj;
    walker.dist = dist.data();
    walker.root = graph.root();
    walker.length = length;
    walker.dfs(graph.root(), 0);
    return walker.profiles;
}

}  // namespace

RootedGraph RootedGraph::clique(int d) {
    if (d < 1) throw InvalidDegree("clique: d must be >= 1");
    RootedGraph g;
    g.kind_ = Kind::clique;
    g.degree_ = d;
    g.root_ = 0;
    g.adj_.resize(static_cast<std::size_t>(d) + 1);
    for (int u = 0; u <= d; ++u) {
        for (int v = 0; v <= d; ++v) {
            if (u != v) g.adj_[static_cast<std::size_t>(u)].push_back(v);
        }
    }
    g.label_ = "clique(" + std::to_string(d) + ")";
    return g;
}

RootedGraph RootedGraph::truncated_tree(int d, int depth) {
    if (d < 1) throw InvalidDegree("truncated_tree: d must be >= 1");
    if (depth < 1) throw std::invalid_argument("truncated_tree: depth must be >= 1");
    {
        double level = d;
        double total = 1;
        for (int l = 1; l <= depth; ++l) {
            total += level;
            if (total > kTreeVertexCap) {
                throw BudgetExceeded("truncated_tree: vertex count exceeds cap");
            }
            level *= (d - 1);
        }
    }
    RootedGraph g;
    g.kind_ = Kind::truncated_tree;
    g.degree_ = d;
    g.root_ = 0;
    g.adj_.emplace_back();
    std::vector<int> frontier{0};
    for (int level = 1; level <= depth; ++level) {
        std::vector<int> next;
        for (int parent : frontier) {
            const int children = (parent == 0) ? d : d - 1;
            for (int c = 0; c < children; ++c) {
                const int id = static_cast<int>(g.adj_.size());
                g.adj_.emplace_back();
                g.adj_[static_cast<std::size_t>(parent)].push_back(id);
                g.adj_[static_cast<std::size_t>(id)].push_back(parent);
                next.push_back(id);
            }
        }
        frontier = std::move(next);
    }
    g.label_ = "tree(" + std::to_string(d) + ",depth=" + std::to_string(depth) + ")";
    return g;
}

RootedGraph RootedGraph::from_adjacency(std::vector<std::vector<int>> neighbors, int root,
                                        int norm_degree) {
    if (neighbors.empty() || root < 0 || root >= static_cast<int>(neighbors.size())) {
        throw std::invalid_argument("from_adjacency: bad root");
    }
    RootedGraph g;
    g.kind_ = Kind::explicit_graph;
    g.root_ = root;
    g.adj_ = std::move(neighbors);
    g.degree_ =
        norm_degree > 0 ? norm_degree : static_cast<int>(g.adj_[static_cast<std::size_t>(root)].size());
    g.label_ = "explicit(n=" + std::to_string(g.adj_.size()) + ")";
    return g;
}

std::vector<int> RootedGraph::distances_from_root() const {
    return bfs_distances(adj_, root_);
}

std::string MomentValue::str() const {
    if (exact) return rational_str(rational);
    return fmt17(value);
}

nlohmann::json WalkMomentReport::to_json() const {
    nlohmann::json j;
    j["graph"] = graph;
    j["length"] = length;
    j["total_walks"] = total_walks;
    j["even_walks"] = even_walks;
    if (has_moment) {
        if (moment_is_exact) {
            j["moment_value"] = {
                {"num", boost::multiprecision::numerator(moment_exact).str()},
                {"den", boost::multiprecision::denominator(moment_exact).str()}};
        } else {
            j["moment_value"] = moment_value;
        }
    }
    nlohmann::json shapes_json = nlohmann::json::array();
    for (const auto& s : shapes) {
        shapes_json.push_back({{"profile", s.multiplicities}, {"count", s.count}});
    }
    j["shapes"] = shapes_json;
    return j;
}

WalkMomentReport enumerate_walks(const RootedGraph& graph, int length) {
    return build_report(graph, length, enumerate_profiles(graph, length), nullptr);
}

WalkMomentReport local_moment_report(const RootedGraph& graph, int length,
                                     const EntryDistribution& dist) {
    return build_report(graph, length, enumerate_profiles(graph, length), &dist);
}

MomentValue local_moment(const RootedGraph& graph, int length, const EntryDistribution& dist) {
    const WalkMomentReport report = local_moment_report(graph, length, dist);
    MomentValue mv;
    mv.exact = report.moment_is_exact;
    mv.rational = report.moment_exact;
    mv.value = report.moment_value;
    return mv;
}

MomentValue moment_gap(int d, int length, const EntryDistribution& dist) {
    if (length <= 0 || length % 2 != 0) {
        throw LengthOdd("moment_gap: length must be a positive even integer");
    }
    const MomentValue c = local_moment(RootedGraph::clique(d), length, dist);
    const MomentValue t = local_moment(RootedGraph::truncated_tree(d, length / 2), length, dist);
    MomentValue gap;
    gap.exact = c.exact && t.exact;
    if (gap.exact) {
        gap.rational = c.rational - t.rational;
        gap.value = static_cast<double>(gap.rational);
    } else {
        gap.value = c.value - t.value;
    }
    return gap;
}

MomentValue expected_trace_moment(const VarianceProfile& profile, const EntryDistribution& dist,
                                  int length) {
    const int n = profile.n();
    if (n > 12 || length > 8) {
        throw BudgetExceeded("expected_trace_moment: feasible only for n <= 12 and length <= 8");
    }
    if (length < 1) throw std::invalid_argument("expected_trace_moment: length must be >= 1");
    {
        const ValidationReport report = validate(profile);
        if (!report.passes()) {
            throw InvalidProfile("expected_trace_moment: profile fails validation: " +
                                 report.summary());
        }
    }

    std::vector<std::vector<int>> adj;
    adj.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) adj.push_back(profile.support_neighbors(v));

    double count = 0.0;
    for (int o = 0; o < n; ++o) count += closed_walk_count(adj, o, length);
    if (count > static_cast<double>(kTraceWalkBudget)) {
        throw BudgetExceeded("expected_trace_moment: " + fmt17(count) +
                             " closed walks exceed budget");
    }

    const auto uniform_sq = profile.uniform_entry_sq();
    MomentValue result;

    if (uniform_sq) {
        // constant sigma on the support: group walks by multiplicity profile
        ProfileCounts profiles;
        for (int o = 0; o < n; ++o) {
            const std::vector<int> dist_to_root = bfs_distances(adj, o);
            WalkEnum walker;
            walker.adj = &adj;
            walker.dist = dist_to_root.data();
            walker.root = o;
            walker.length = length;
            walker.dfs(o, 0);
            for (const auto& [mults, c] : walker.profiles) profiles[mults] += c;
        }
        MomentAccumulator acc;
        for (const auto& [mults, c] : profiles) acc.add(mults, c, dist);
        if (acc.exact) {
            result.exact = true;
            if (acc.rational_sum == 0) {
                result.rational = 0;
            } else {
                // nonzero terms have all-even multiplicities, so every sigma
                // product equals (sigma^2)^(length/2)
                result.rational = rational_pow(*uniform_sq, length / 2) * acc.rational_sum / n;
            }
            result.value = static_cast<double>(result.rational);
        } else {
            result.value =
                std::pow(profile.sigma_star(), length) * acc.real_sum / static_cast<double>(n);
        }
        return result;
    }

    // custom profile: accumulate per-walk sigma products in floating point
    struct TraceEnum {
        const VarianceProfile* profile = nullptr;
        const std::vector<std::vector<int>>* adj = nullptr;
        const EntryDistribution* law = nullptr;
        const int* dist_to_root = nullptr;
        int root = 0;
        int length = 0;
        EdgeStack edges;
        double sum = 0.0;

        void dfs(int v, int t) {
            if (t == length) {
                if (v != root) return;
                double term = 1.0;
                for (const auto& [key, mult] : edges) {
                    const int a = static_cast<int>(key >> 32);
                    const int b = static_cast<int>(key & 0xffffffffULL);
                    term *= std::pow(profile->entry(a, b), mult) * law->moment(mult);
                    if (term == 0.0) break;
                }
                sum += term;
                return;
            }
            const int remaining = length - t - 1;
            for (int u : (*adj)[static_cast<std::size_t>(v)]) {
                if (dist_to_root[u] > remaining) continue;
                const std::uint64_t key = edge_key(v, u);
                push_edge(edges, key);
                dfs(u, t + 1);
                pop_edge(edges, key);
            }
        }
    };

    double total = 0.0;
    for (int o = 0; o < n; ++o) {
        const std::vector<int> dist_to_root = bfs_distances(adj, o);
        TraceEnum walker;
        walker.profile = &profile;
        walker.adj = &adj;
        walker.law = &dist;
        walker.dist_to_root = dist_to_root.data();
        walker.root = o;
        walker.length = length;
        walker.dfs(o, 0);
        total += walker.sum;
    }
    result.exact = false;
    result.value = total / n;
    return result;
}

BoundReport shape_sum_bound_check(const VarianceProfile& profile, int length, int max_n) {
    const int n = profile.n();
    if (n > max_n || n > 10 || length > 8) {
        throw BudgetExceeded("shape_sum_bound_check: feasible only for n <= " +
                             std::to_string(std::min(max_n, 10)) + " and length <= 8");
    }
    if (length <= 0 || length % 2 != 0) {
        throw LengthOdd("shape_sum_bound_check: length must be a positive even integer");
    }
    {
        const ValidationReport report = validate(profile);
        if (!report.passes()) {
            throw InvalidProfile("shape_sum_bound_check: profile fails validation: " +
                                 report.summary());
        }
    }

    std::vector<std::vector<int>> adj;
    adj.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) adj.push_back(profile.support_neighbors(v));
    double count = 0.0;
    for (int o = 0; o < n; ++o) count += closed_walk_count(adj, o, length);
    if (count > static_cast<double>(kTraceWalkBudget)) {
        throw BudgetExceeded("shape_sum_bound_check: walk count exceeds budget");
    }

    const auto uniform_sq = profile.uniform_entry_sq();

    // Canonical shape: the walk with vertices relabeled by first appearance.
    // sums maps the canonical label sequence of (u_1..u_2p) to the walk count
    // and, for custom profiles, the exact dyadic sum of sigma products.
    struct ShapeEnum {
        const VarianceProfile* profile = nullptr;
        const std::vector<std::vector<int>>* adj = nullptr;
        const int* dist_to_root = nullptr;
        int root = 0;
        int length = 0;
        bool uniform = true;
        std::vector<int> label;    // 0 = unlabeled
        std::vector<int> labeled;  // vertices in labeling order
        std::vector<int> seq;      // labels of u_1..u_t
        Rational sigma_acc = 1;
        std::map<std::vector<int>, std::pair<std::uint64_t, Rational>> sums;

        void dfs(int v, int t) {
            if (t == length) {
                if (v == root) {
                    auto& slot = sums[seq];
                    slot.first += 1;
                    if (!uniform) slot.second += sigma_acc;
                }
                return;
            }
            const int remaining = length - t - 1;
            for (int u : (*adj)[static_cast<std::size_t>(v)]) {
                if (dist_to_root[u] > remaining) continue;
                const bool fresh = label[static_cast<std::size_t>(u)] == 0;
                if (fresh) {
                    label[static_cast<std::size_t>(u)] = static_cast<int>(labeled.size()) + 1;
                    labeled.push_back(u);
                }
                const bool final_step = (t + 1 == length);
                if (!final_step) seq.push_back(label[static_cast<std::size_t>(u)]);
                Rational saved;
                if (!uniform) {
                    saved = sigma_acc;
                    sigma_acc *= rational_from_double(profile->entry(v, u));
                }
                dfs(u, t + 1);
                if (!uniform) sigma_acc = saved;
                if (!final_step) seq.pop_back();
                if (fresh) {
                    label[static_cast<std::size_t>(u)] = 0;
                    labeled.pop_back();
                }
            }
        }
    };

    ShapeEnum walker;
    walker.profile = &profile;
    walker.adj = &adj;
    walker.length = length;
    walker.uniform = uniform_sq.has_value();
    walker.label.assign(static_cast<std::size_t>(n), 0);
    for (int o = 0; o < n; ++o) {
        const std::vector<int> dist_to_root = bfs_distances(adj, o);
        walker.dist_to_root = dist_to_root.data();
        walker.root = o;
        walker.label[static_cast<std::size_t>(o)] = 1;
        walker.labeled.assign(1, o);
        walker.seq.assign(1, 1);
        walker.dfs(o, 0);
        walker.label[static_cast<std::size_t>(o)] = 0;
    }

    BoundReport report;
    report.n = n;
    report.length = length;
    report.shape_count = walker.sums.size();
    report.worst_ratio = 0;
    const Rational sigma_star_sq =
        uniform_sq ? *uniform_sq
                   : rational_from_double(profile.sigma_star()) *
                         rational_from_double(profile.sigma_star());
    const int p = length / 2;

    for (const auto& [seq, data] : walker.sums) {
        std::map<std::pair<int, int>, int> mult;
        int m = 0;
        for (int t = 0; t < length; ++t) {
            const int a = seq[static_cast<std::size_t>(t)];
            const int b = seq[static_cast<std::size_t>((t + 1) % length)];
            ++mult[{std::min(a, b), std::max(a, b)}];
            m = std::max({m, a, b});
        }
        const bool all_even = std::all_of(mult.begin(), mult.end(),
                                          [](const auto& e) { return e.second % 2 == 0; });
        if (!all_even) continue;
        ++report.even_shape_count;

        ShapeTerm term;
        term.shape = seq;
        term.vertices = m;
        for (const auto& [e, q] : mult) term.multiplicities.push_back(q);
        std::sort(term.multiplicities.begin(), term.multiplicities.end(), std::greater<>());
        if (uniform_sq) {
            term.lhs = Rational(data.first) * rational_pow(*uniform_sq, p);
        } else {
            term.lhs = data.second;
        }
        term.bound = Rational(n) * rational_pow(sigma_star_sq, p - (m - 1));
        const Rational ratio = term.lhs / term.bound;
        term.ratio = static_cast<double>(ratio);
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_shape = seq;
        }
        report.terms.push_back(std::move(term));
    }

    if (report.worst_ratio > 1) {
        std::ostringstream os;
        os << "shape_sum_bound_check: ratio " << rational_str(report.worst_ratio)
           << " exceeds 1 for shape [";
        for (std::size_t i = 0; i < report.worst_shape.size(); ++i) {
            if (i) os << ' ';
            os << report.worst_shape[i];
        }
        os << "]";
        throw BoundViolated(os.str());
    }
    return report;
}

}  // namespace rmtlab::walks
