#ifndef EPINET_EPIDEMIC_HPP
#define EPINET_EPIDEMIC_HPP

#include <cstdint>
#include <vector>

#include "epinet/netgen.hpp"

namespace epinet {

/// Per-edge transmission probability 1 - (1 - y1*x2)^w for an infective
/// with infectivity y1 contacting a susceptible with susceptibility x2
/// over an edge of weight w.
double transmission_prob(int w, double y1, double x2);

struct EpidemicResult {
    int final_size = 0;
    std::vector<int> infected;          // sorted node ids
    int generations = 0;                // index case is generation 1
    std::vector<int> generation_sizes;  // newly infected per generation
    int index_case = 0;
};

/// Generation-synchronous SIR outbreak. Every transmission attempt along a
/// directed edge draws its own uniform keyed by (edge, direction), so the
/// outcome is invariant to processing order and couples monotonically
/// across trait changes under a shared seed.
EpidemicResult simulate_outbreak(const WeightedGraph& graph,
                                 const NodeAttributes& attrs, int index_case,
                                 std::uint64_t seed);

/// Bond percolation for reciprocal transmission (every trait atom has
/// x == y): each edge (i,j,w) is kept with probability t(w, x_i, x_j).
/// Returns the component size multiset of the kept subgraph.
/// Throws std::logic_error if some node has x != y.
std::vector<int> percolate_symmetric(const WeightedGraph& graph,
                                     const NodeAttributes& attrs,
                                     std::uint64_t seed);

struct SimConfig {
    int n = 0;
    DegreeDistribution deg;
    WeightKernel kernel;
    TraitDistribution traits;
};

/// Major-outbreak classification: final_size >= max(min_count, fraction*n).
struct ThresholdRule {
    int min_count = 50;
    double fraction = 0.01;
    int threshold(int n) const;
};

struct OutbreakStats {
    int replicates = 0;
    int major_count = 0;
    int threshold = 0;
    double pi_hat = 0.0;       // fraction of replicates with a major outbreak
    double tau_hat = 0.0;      // mean relative final size among major outbreaks
    double pi_half_width = 0.0;
    double tau_half_width = 0.0;
};

/// Independent (graph, attributes, outbreak) replicates with a uniform
/// random index case; replicate r uses the stream splitmix64(seed ^ r).
/// n_threads = 0 picks hardware concurrency.
OutbreakStats estimate_outbreak_stats(const SimConfig& config, int replicates,
                                      ThresholdRule rule, std::uint64_t seed,
                                      int n_threads = 0);

}  // namespace epinet

#endif
