#ifndef EPINET_NETGEN_HPP
#define EPINET_NETGEN_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "epinet/distributions.hpp"

namespace epinet {

/// Counter-based generator step; also used to derive independent
/// per-replicate and per-attempt streams from a master seed.
std::uint64_t splitmix64(std::uint64_t state);

/// Uniform double in [0,1) from a 64-bit word.
double uniform_from_bits(std::uint64_t bits);

/// Sampled node-level inputs to the graph construction: iid degrees,
/// per-half-edge weights (conditional on degree) and iid trait pairs,
/// the traits independent of degrees and weights.
struct NodeAttributes {
    int n = 0;
    std::vector<int> degree;
    std::vector<std::vector<int>> half_edge_weights;
    std::vector<double> x;
    std::vector<double> y;
};

struct Edge {
    int a = 0;
    int b = 0;
    int w = 1;
};

/// Simple weighted multigraph. Self-loops and parallel edges are allowed.
class WeightedGraph {
public:
    struct Incidence {
        int neighbor;
        int weight;
        std::uint64_t attempt_key;  // distinct per (edge, direction)
    };

    WeightedGraph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Incidence>& incident(int node) const { return adjacency_[node]; }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

struct BuildDiagnostics {
    std::map<int, int> dropped_half_edges;  // per weight class, 0 or 1
    long self_loops = 0;
    long multi_edges = 0;
    std::map<int, long> realized_degree_histogram;
};

NodeAttributes sample_node_attributes(int n, const DegreeDistribution& deg,
                                      const WeightKernel& kernel,
                                      const TraitDistribution& traits,
                                      std::uint64_t seed);

/// Pairs half-edges uniformly at random within each weight class. An odd
/// class drops one uniformly chosen half-edge.
std::pair<WeightedGraph, BuildDiagnostics> build_network(const NodeAttributes& attrs,
                                                         std::uint64_t seed);

/// Edge-list dump: header line `# n=<n>`, then one `a b w` line per edge.
void write_edge_list(const WeightedGraph& graph, std::ostream& out);

}  // namespace epinet

#endif
