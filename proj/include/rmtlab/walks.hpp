#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmtlab/entries.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/profiles.hpp"
#include "rmtlab/rational.hpp"

namespace rmtlab::walks {

// A finite rooted graph to enumerate closed walks on. The truncated tree cut
// at depth k carries every closed walk of length 2k from the root of the
// infinite d-regular tree, so the truncation is exact for that purpose.
class RootedGraph {
public:
    enum class Kind { clique, truncated_tree, explicit_graph };

    // complete graph on d+1 vertices, no self-loops, rooted anywhere
    static RootedGraph clique(int d);
    // root has d children, internal vertices d-1, leaves at the given depth
    static RootedGraph truncated_tree(int d, int depth);
    static RootedGraph from_adjacency(std::vector<std::vector<int>> neighbors, int root,
                                      int norm_degree = -1);

    Kind kind() const { return kind_; }
    int degree() const { return degree_; }  // normalization degree d
    int root() const { return root_; }
    int vertex_count() const { return static_cast<int>(adj_.size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    std::vector<int> distances_from_root() const;
    const std::string& label() const { return label_; }

private:
    Kind kind_ = Kind::explicit_graph;
    int degree_ = 0;
    int root_ = 0;
    std::vector<std::vector<int>> adj_;
    std::string label_;
};

// Count of walks grouped by the multiset of edge traversal multiplicities;
// for iid entries the expected weight of a walk depends only on this profile.
struct ShapeProfileCount {
    std::vector<int> multiplicities;  // sorted descending, sums to the walk length
    std::uint64_t count = 0;
};

struct WalkMomentReport {
    std::string graph;
    int length = 0;
    std::uint64_t total_walks = 0;
    std::uint64_t even_walks = 0;  // all multiplicities even
    bool has_moment = false;
    bool moment_is_exact = false;
    Rational moment_exact;     // valid when moment_is_exact
    double moment_value = 0.0;  // valid when has_moment
    std::vector<ShapeProfileCount> shapes;

    nlohmann::json to_json() const;
};

struct MomentValue {
    bool exact = false;
    Rational rational;
    double value = 0.0;
    std::string str() const;
};

// Exhaustive enumeration of closed walks of the given even length from the
// root. Preflight rejects instances whose closed-walk count, computed by
// repeated matrix-vector products, exceeds 1e8.
WalkMomentReport enumerate_walks(const RootedGraph& graph, int length);

// m((G,o), 2k, xi) = d^-k * sum over closed walks of prod_e E[xi^q(e)].
// Exact rational arithmetic whenever the moment table is rational.
WalkMomentReport local_moment_report(const RootedGraph& graph, int length,
                                     const EntryDistribution& dist);
MomentValue local_moment(const RootedGraph& graph, int length, const EntryDistribution& dist);

// local_moment(clique(d)) - local_moment(truncated_tree(d, length/2))
MomentValue moment_gap(int d, int length, const EntryDistribution& dist);

// Brute-force normalized expected trace moment (1/n) E tr(X^length) over the
// profile support. Feasible only for n <= 12 and length <= 8.
MomentValue expected_trace_moment(const VarianceProfile& profile, const EntryDistribution& dist,
                                  int length);

struct ShapeTerm {
    std::vector<int> shape;           // vertex labels in order of first appearance
    std::vector<int> multiplicities;  // sorted descending
    int vertices = 0;
    Rational lhs;    // shape-restricted sum of sigma products
    Rational bound;  // n * (sigma*)^(2p - 2(m-1))
    double ratio = 0.0;
};

struct BoundReport {
    int n = 0;
    int length = 0;
    std::size_t shape_count = 0;
    std::size_t even_shape_count = 0;
    Rational worst_ratio;
    std::vector<int> worst_shape;
    std::vector<ShapeTerm> terms;  // even shapes only
};

// Verifies the doubly-stochastic walk-sum bound on every even shape of the
// given length, in exact arithmetic. Throws BoundViolated if any ratio
// exceeds one (that would be an implementation bug, the inequality is proven).
BoundReport shape_sum_bound_check(const VarianceProfile& profile, int length, int max_n = 10);

}  // namespace rmtlab::walks
