#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "epinet/analytics.hpp"
#include "epinet/epidemic.hpp"

using namespace epinet;

namespace {

NodeAttributes uniform_attrs(int n, double x, double y) {
    NodeAttributes attrs;
    attrs.n = n;
    attrs.degree.assign(n, 0);
    attrs.half_edge_weights.resize(n);
    attrs.x.assign(n, x);
    attrs.y.assign(n, y);
    return attrs;
}

WeightedGraph path_graph(int n, int w) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
    return WeightedGraph(n, std::move(edges));
}

}  // namespace

TEST_CASE("transmission probability") {
    CHECK(transmission_prob(7, 0.0, 0.9) == 0.0);
    CHECK(transmission_prob(1, 1.0, 1.0) == 1.0);
    CHECK(transmission_prob(2, 0.5, 0.5) == doctest::Approx(0.4375).epsilon(1e-12));
    // monotone in each argument
    CHECK(transmission_prob(3, 0.5, 0.5) >= transmission_prob(2, 0.5, 0.5));
    CHECK(transmission_prob(2, 0.6, 0.5) >= transmission_prob(2, 0.5, 0.5));
}

TEST_CASE("isolated index case gives final size one") {
    auto attrs = uniform_attrs(5, 0.9, 0.9);
    WeightedGraph graph(5, {});
    auto res = simulate_outbreak(graph, attrs, 2, 17);
    CHECK(res.final_size == 1);
    CHECK(res.infected == std::vector<int>{2});
    CHECK(res.generations == 1);
}

TEST_CASE("certain transmission infects the whole component") {
    auto attrs = uniform_attrs(10, 1.0, 1.0);
    auto graph = path_graph(10, 1);
    auto res = simulate_outbreak(graph, attrs, 0, 1);
    CHECK(res.final_size == 10);
    CHECK(res.generations == 10);
}

TEST_CASE("index case out of range") {
    auto attrs = uniform_attrs(3, 0.5, 0.5);
    WeightedGraph graph(3, {});
    CHECK_THROWS_AS(simulate_outbreak(graph, attrs, 3, 1), std::out_of_range);
}

TEST_CASE("self-loops never transmit") {
    auto attrs = uniform_attrs(2, 1.0, 1.0);
    WeightedGraph graph(2, {{0, 0, 5}});
    auto res = simulate_outbreak(graph, attrs, 0, 1);
    CHECK(res.final_size == 1);
}

TEST_CASE("identical inputs give identical results") {
    DegreeDistribution deg({{3, 0.5}, {6, 0.5}});
    auto kernel = WeightKernel::degree_independent({{1, 0.5}, {4, 0.5}});
    auto traits = make_two_point_trait(0.4, 0.5, 0.4, 0.5, 0.5);
    auto attrs = sample_node_attributes(300, deg, kernel, traits, 21);
    auto [graph, diag] = build_network(attrs, 22);
    auto r1 = simulate_outbreak(graph, attrs, 5, 23);
    auto r2 = simulate_outbreak(graph, attrs, 5, 23);
    CHECK(r1.infected == r2.infected);
    CHECK(r1.generations == r2.generations);
}

TEST_CASE("raising all traits never shrinks the outbreak (shared seed coupling)") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        DegreeDistribution deg = make_truncated_poisson(3.0, 10);
        auto kernel = WeightKernel::degree_independent({{1, 0.5}, {3, 0.5}});
        TraitDistribution lo_traits({{0.3, 0.25, 1.0}});
        auto attrs = sample_node_attributes(200, deg, kernel, lo_traits, rng());
        auto [graph, diag] = build_network(attrs, rng());

        NodeAttributes raised = attrs;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < raised.n; ++i) {
            raised.x[i] += (1.0 - raised.x[i]) * unif(rng);
            raised.y[i] += (1.0 - raised.y[i]) * unif(rng);
        }
        std::uint64_t seed = rng();
        int index = int(rng() % 200);
        auto base = simulate_outbreak(graph, attrs, index, seed);
        auto more = simulate_outbreak(graph, raised, index, seed);
        CHECK(more.final_size >= base.final_size);
        CHECK(std::includes(more.infected.begin(), more.infected.end(),
                            base.infected.begin(), base.infected.end()));
    }
}

TEST_CASE("percolation keeps everything at t=1 and nothing at t=0") {
    auto ones = uniform_attrs(8, 1.0, 1.0);
    auto graph = path_graph(8, 1);
    auto sizes = percolate_symmetric(graph, ones, 3);
    REQUIRE(sizes.size() == 1);
    CHECK(sizes[0] == 8);

    auto zeros = uniform_attrs(8, 0.0, 0.0);
    auto sizes0 = percolate_symmetric(graph, zeros, 3);
    CHECK(sizes0.size() == 8);
}

TEST_CASE("percolation rejects asymmetric traits") {
    auto attrs = uniform_attrs(4, 0.5, 0.7);
    auto graph = path_graph(4, 1);
    CHECK_THROWS_AS(percolate_symmetric(graph, attrs, 1), std::logic_error);
}

TEST_CASE("largest percolation component tracks analytic outbreak probability") {
    // two symmetric trait groups, 5-regular unweighted network, cv=0.5
    const int n = 100000;
    DegreeDistribution deg({{5, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});
    auto traits = make_two_point_trait(0.48, 0.5, 0.48, 0.5, 1.0);
    double pi = extinction_probabilities(deg, kernel, traits).pi;

    double acc = 0.0;
    const int reps = 5;
    for (int rep = 0; rep < reps; ++rep) {
        auto attrs = sample_node_attributes(n, deg, kernel, traits, 700 + rep);
        auto [graph, diag] = build_network(attrs, 800 + rep);
        auto sizes = percolate_symmetric(graph, attrs, 900 + rep);
        acc += double(sizes.back()) / n;
    }
    CHECK(acc / reps == doctest::Approx(pi).epsilon(0.03));
}

TEST_CASE("outbreak statistics: subcritical and threshold behavior") {
    DegreeDistribution deg({{5, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});
    // cv=0: R0 = 0.48^2 * 4 = 0.9216 < 1
    auto traits = make_two_point_trait(0.48, 0.0, 0.48, 0.0, 1.0);
    SimConfig small{2000, deg, kernel, traits};
    SimConfig large{100000, deg, kernel, traits};
    auto stats_small = estimate_outbreak_stats(small, 300, ThresholdRule{}, 61);
    auto stats_large = estimate_outbreak_stats(large, 300, ThresholdRule{}, 61);
    CHECK(stats_large.pi_hat <= stats_small.pi_hat);
    CHECK(stats_large.pi_hat < 0.005);
}

TEST_CASE("outbreak statistics: supercritical, threshold-insensitive, bimodal") {
    DegreeDistribution deg({{5, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});
    auto traits = make_two_point_trait(0.48, 0.8, 0.48, 0.8, 1.0);
    SimConfig config{10000, deg, kernel, traits};

    auto base = estimate_outbreak_stats(config, 400, ThresholdRule{}, 62);
    auto tight = estimate_outbreak_stats(config, 400, ThresholdRule{25, 0.005}, 62);
    auto loose = estimate_outbreak_stats(config, 400, ThresholdRule{100, 0.02}, 62);
    CHECK(base.pi_hat == doctest::Approx(tight.pi_hat).epsilon(0.02));
    CHECK(base.pi_hat == doctest::Approx(loose.pi_hat).epsilon(0.02));
    CHECK(base.pi_hat > 0.2);
    CHECK(base.tau_hat > 0.1);
}
