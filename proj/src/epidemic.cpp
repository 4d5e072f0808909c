#include "epinet/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace epinet {

double transmission_prob(int w, double y1, double x2) {
    return 1.0 - std::pow(1.0 - y1 * x2, w);
}

namespace {

double attempt_uniform(std::uint64_t seed, std::uint64_t attempt_key) {
    return uniform_from_bits(splitmix64(seed ^ splitmix64(attempt_key)));
}

/// Union-find with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(int n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int v) {
        while (v != parent_[v]) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    int component_size(int v) { return size_[find(v)]; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

}  // namespace

EpidemicResult simulate_outbreak(const WeightedGraph& graph,
                                 const NodeAttributes& attrs, int index_case,
                                 std::uint64_t seed) {
    if (graph.n() != attrs.n) {
        throw std::invalid_argument("simulate_outbreak: graph/attrs size mismatch");
    }
    if (index_case < 0 || index_case >= graph.n()) {
        throw std::out_of_range("simulate_outbreak: index case out of range");
    }

    enum class State : unsigned char { kSusceptible, kInfected, kRemoved };
    std::vector<State> state(graph.n(), State::kSusceptible);
    state[index_case] = State::kInfected;

    EpidemicResult result;
    result.index_case = index_case;
    result.infected.push_back(index_case);

    std::vector<int> current{index_case};
    std::vector<int> next;
    while (!current.empty()) {
        ++result.generations;
        result.generation_sizes.push_back(int(current.size()));
        next.clear();
        for (int i : current) {
            for (const auto& inc : graph.incident(i)) {
                int j = inc.neighbor;
                if (j == i) continue;  // self-loops never transmit
                if (state[j] != State::kSusceptible) continue;
                double t = transmission_prob(inc.weight, attrs.y[i], attrs.x[j]);
                if (attempt_uniform(seed, inc.attempt_key) < t) {
                    state[j] = State::kInfected;
                    next.push_back(j);
                    result.infected.push_back(j);
                }
            }
            state[i] = State::kRemoved;
        }
        std::swap(current, next);
    }

    std::sort(result.infected.begin(), result.infected.end());
    result.final_size = int(result.infected.size());
    return result;
}

std::vector<int> percolate_symmetric(const WeightedGraph& graph,
                                     const NodeAttributes& attrs,
                                     std::uint64_t seed) {
    if (graph.n() != attrs.n) {
        throw std::invalid_argument("percolate_symmetric: graph/attrs size mismatch");
    }
    for (int i = 0; i < attrs.n; ++i) {
        if (attrs.x[i] != attrs.y[i]) {
            throw std::logic_error("percolate_symmetric: traits not symmetric (x != y)");
        }
    }

    DisjointSet dsu(graph.n());
    std::mt19937_64 rng(splitmix64(seed ^ 0x70657263ULL));
    for (const Edge& e : graph.edges()) {
        double t = transmission_prob(e.w, attrs.x[e.a], attrs.x[e.b]);
        if (uniform_from_bits(rng()) < t) dsu.unite(e.a, e.b);
    }

    std::vector<int> sizes;
    for (int v = 0; v < graph.n(); ++v) {
        if (dsu.find(v) == v) sizes.push_back(dsu.component_size(v));
    }
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

int ThresholdRule::threshold(int n) const {
    return std::max(min_count, int(fraction * n));
}

OutbreakStats estimate_outbreak_stats(const SimConfig& config, int replicates,
                                      ThresholdRule rule, std::uint64_t seed,
                                      int n_threads) {
    if (replicates < 1) {
        throw std::invalid_argument("estimate_outbreak_stats: replicates < 1");
    }
    if (config.n < 1) throw std::invalid_argument("estimate_outbreak_stats: n < 1");

    std::vector<int> final_sizes(replicates, 0);
    auto run_range = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            std::uint64_t rep_seed = splitmix64(seed ^ std::uint64_t(r));
            NodeAttributes attrs = sample_node_attributes(
                config.n, config.deg, config.kernel, config.traits, rep_seed);
            auto [graph, diag] = build_network(attrs, splitmix64(rep_seed + 1));
            int index = int(splitmix64(rep_seed + 2) % std::uint64_t(config.n));
            EpidemicResult res =
                simulate_outbreak(graph, attrs, index, splitmix64(rep_seed + 3));
            final_sizes[r] = res.final_size;
        }
    };

    int workers = n_threads > 0 ? n_threads
                                : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, replicates);
    if (workers <= 1) {
        run_range(0, replicates);
    } else {
        std::vector<std::thread> pool;
        int chunk = (replicates + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            int lo = t * chunk;
            int hi = std::min(replicates, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    OutbreakStats stats;
    stats.replicates = replicates;
    stats.threshold = rule.threshold(config.n);
    double tau_sum = 0.0;
    double tau_sq = 0.0;
    for (int fs : final_sizes) {
        if (fs >= stats.threshold) {
            ++stats.major_count;
            double rel = double(fs) / config.n;
            tau_sum += rel;
            tau_sq += rel * rel;
        }
    }
    stats.pi_hat = double(stats.major_count) / replicates;
    stats.pi_half_width =
        1.96 * std::sqrt(stats.pi_hat * (1.0 - stats.pi_hat) / replicates);
    if (stats.major_count > 0) {
        stats.tau_hat = tau_sum / stats.major_count;
        if (stats.major_count > 1) {
            double var = std::max(
                0.0, (tau_sq - tau_sum * tau_sum / stats.major_count) /
                         (stats.major_count - 1));
            stats.tau_half_width = 1.96 * std::sqrt(var / stats.major_count);
        }
    }
    return stats;
}

}  // namespace epinet
