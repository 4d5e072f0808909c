#include "epinet/netgen.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace epinet {

std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform_from_bits(std::uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53;
}

namespace {

/// Inverse-cdf sampler over pmf indices; binary search on the cumulative.
class CdfSampler {
public:
    template <typename Pair>
    explicit CdfSampler(const std::vector<Pair>& pmf) {
        cdf_.reserve(pmf.size());
        double acc = 0.0;
        for (const auto& entry : pmf) {
            acc += entry.second;
            cdf_.push_back(acc);
        }
        cdf_.back() = 1.0;
    }

    explicit CdfSampler(const std::vector<TraitAtom>& atoms) {
        cdf_.reserve(atoms.size());
        double acc = 0.0;
        for (const auto& a : atoms) {
            acc += a.p;
            cdf_.push_back(acc);
        }
        cdf_.back() = 1.0;
    }

    std::size_t operator()(std::mt19937_64& rng) const {
        double u = uniform_from_bits(rng());
        return std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
    }

private:
    std::vector<double> cdf_;
};

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adjacency_(n) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        if (edge.a < 0 || edge.a >= n_ || edge.b < 0 || edge.b >= n_) {
            throw std::invalid_argument("WeightedGraph: node id out of range");
        }
        if (edge.w < 1) throw std::invalid_argument("WeightedGraph: weight < 1");
        adjacency_[edge.a].push_back({edge.b, edge.w, 2 * std::uint64_t(e)});
        adjacency_[edge.b].push_back({edge.a, edge.w, 2 * std::uint64_t(e) + 1});
    }
}

NodeAttributes sample_node_attributes(int n, const DegreeDistribution& deg,
                                      const WeightKernel& kernel,
                                      const TraitDistribution& traits,
                                      std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_node_attributes: n < 1");
    kernel.validate_against(deg);

    std::mt19937_64 rng(splitmix64(seed));
    CdfSampler deg_sampler(deg.support());
    CdfSampler trait_sampler(traits.atoms());

    // weight samplers built lazily per observed degree
    std::map<int, CdfSampler> weight_samplers;

    NodeAttributes attrs;
    attrs.n = n;
    attrs.degree.resize(n);
    attrs.half_edge_weights.resize(n);
    attrs.x.resize(n);
    attrs.y.resize(n);

    for (int i = 0; i < n; ++i) {
        int d = deg.support()[deg_sampler(rng)].first;
        attrs.degree[i] = d;
        if (d > 0) {
            auto it = weight_samplers.find(d);
            if (it == weight_samplers.end()) {
                it = weight_samplers.emplace(d, CdfSampler(kernel.row(d))).first;
            }
            const WeightPmf& row = kernel.row(d);
            auto& ws = attrs.half_edge_weights[i];
            ws.reserve(d);
            for (int j = 0; j < d; ++j) {
                ws.push_back(row[it->second(rng)].first);
            }
        }
        const TraitAtom& atom = traits.atoms()[trait_sampler(rng)];
        attrs.x[i] = atom.x;
        attrs.y[i] = atom.y;
    }
    return attrs;
}

std::pair<WeightedGraph, BuildDiagnostics> build_network(const NodeAttributes& attrs,
                                                         std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed ^ 0x6e7974676e655245ULL));

    // group half-edges (owner node ids) by weight
    std::map<int, std::vector<int>> classes;
    for (int i = 0; i < attrs.n; ++i) {
        for (int w : attrs.half_edge_weights[i]) classes[w].push_back(i);
    }

    BuildDiagnostics diag;
    std::vector<Edge> edges;
    for (auto& [w, stubs] : classes) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        // after the shuffle the trailing stub of an odd class is uniform
        std::size_t m = stubs.size();
        if (m % 2 == 1) {
            diag.dropped_half_edges[w] = 1;
            --m;
        } else {
            diag.dropped_half_edges[w] = 0;
        }
        for (std::size_t k = 0; k + 1 < m; k += 2) {
            edges.push_back({stubs[k], stubs[k + 1], w});
        }
    }

    std::set<std::pair<int, int>> seen;
    std::vector<long> realized(attrs.n, 0);
    for (const Edge& e : edges) {
        ++realized[e.a];
        ++realized[e.b];
        if (e.a == e.b) {
            ++diag.self_loops;
            continue;
        }
        auto key = std::minmax(e.a, e.b);
        if (!seen.insert(key).second) ++diag.multi_edges;
    }
    for (long d : realized) ++diag.realized_degree_histogram[int(d)];

    return {WeightedGraph(attrs.n, std::move(edges)), diag};
}

void write_edge_list(const WeightedGraph& graph, std::ostream& out) {
    out << "# n=" << graph.n() << '\n';
    for (const Edge& e : graph.edges()) {
        out << e.a << ' ' << e.b << ' ' << e.w << '\n';
    }
}

}  // namespace epinet
