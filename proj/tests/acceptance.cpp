// Acceptance suite: one pass/fail line per criterion; exit code is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "epinet/analytics.hpp"
#include "epinet/epidemic.hpp"
#include "epinet/experiment.hpp"
#include "epinet/netgen.hpp"

using namespace epinet;
namespace xp = epinet::experiment;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id,
                what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) return false;
    }
    return true;
}

void criterion_1_and_2() {
    auto start = std::chrono::steady_clock::now();
    DegreeDistribution const_deg({{5, 1.0}});
    DegreeDistribution pois_deg = make_truncated_poisson(4.0, 15);
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});

    double worst_cf = 0.0;
    double worst_trace = 0.0;
    for (const auto& deg : {const_deg, pois_deg}) {
        auto dm = deg.moments();
        for (double cv : {0.0, 0.5, 1.0}) {
            for (double rho : {-0.5, 0.0, 0.7}) {
                auto traits = make_two_point_trait(0.2, cv, 0.2, cv, rho);
                auto om = build_offspring_matrix(deg, kernel, traits);
                double sr = spectral_radius(om.m);
                double cf = r0_unweighted_closed_form(0.2, cv, 0.2, cv, rho,
                                                      dm.mean, dm.variance);
                worst_cf = std::max(worst_cf, std::abs(sr - cf));
                worst_trace = std::max(worst_trace, std::abs(sr - om.m.trace()));
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start).count();
    report(1, "closed form vs spectral radius on the 3x3x2 grid",
           worst_cf <= 1e-8 && secs < 1.0,
           "max |diff| = " + fmt(worst_cf) + ", " + fmt(secs) + " s");
    report(2, "trace identity for rank-one unweighted matrices",
           worst_trace <= 1e-10, "max |diff| = " + fmt(worst_trace));
}

void criterion_3() {
    const int d = 5;
    const double p = 0.5;
    const double mu_w = 10.0;
    DegreeDistribution deg({{d, 1.0}});
    TraitDistribution traits({{std::sqrt(p), std::sqrt(p), 1.0}});

    double worst_pgf = 0.0;
    double worst_sr = 0.0;
    std::vector<double> values;
    for (int r : {1, 2, 5, 10}) {
        double closed = r0_negbin(d, p, r, mu_w);
        values.push_back(closed);
        auto pmf = make_negbin_pmf(r, mu_w, 1e-13);
        worst_pgf = std::max(
            worst_pgf, std::abs(closed - r0_fixed_degree_random_weight(d, p, pmf)));
        auto om = build_offspring_matrix(
            deg, WeightKernel::degree_independent(pmf), traits);
        worst_sr = std::max(worst_sr, std::abs(closed - spectral_radius(om.m)));
    }
    double expected_r10 = 4.0 * (1.0 - std::pow(2.0, -10.0));
    bool ok = worst_pgf <= 1e-8 && worst_sr <= 1e-8 &&
              strictly_increasing(values) &&
              std::abs(values.back() - expected_r10) <= 1e-10;
    report(3, "negative binomial R0 vs pgf and spectral radius, increasing in r",
           ok, "pgf diff = " + fmt(worst_pgf) + ", matrix diff = " + fmt(worst_sr) +
               ", R0(r=10) = " + fmt(values.back()));
}

void criterion_4() {
    auto [deg_random, deg_fixed] = jensen_gap(5, 0.5, {{10, 1.0}});
    bool ok = std::abs(deg_random - deg_fixed) <= 1e-12;

    bool strict = true;
    auto [tp_random, tp_fixed] = jensen_gap(5, 0.5, {{1, 0.5}, {19, 0.5}});
    strict = strict && tp_random < tp_fixed;
    for (int r = 1; r <= 9; ++r) {
        auto [rnd, fixed] = jensen_gap(5, 0.5, make_negbin_pmf(r, 10.0, 1e-12));
        strict = strict && rnd < fixed;
    }
    report(4, "Jensen inequality for random vs fixed-mean weights", ok && strict,
           "degenerate gap = " + fmt(std::abs(deg_random - deg_fixed)));
}

void criterion_5() {
    bool ok = true;
    double worst = 0.0;
    for (double z = 1e-6; z <= 1e3 * (1 + 1e-9); z *= std::pow(10.0, 0.25)) {
        ok = ok && appendix_g(z) > 0.0;
        double h = 1e-7 * std::max(1.0, z);
        double fd = (appendix_g(z + h) - appendix_g(z - h)) / (2.0 * h);
        double analytic = 1.0 / (1.0 + z) - 1.0 / ((1.0 + z) * (1.0 + z));
        ok = ok && fd > 0.0;
        worst = std::max(worst, std::abs(fd - analytic));
    }
    ok = ok && worst <= 1e-6;
    report(5, "appendix g(z) > 0 and g'(z) > 0 on a log grid", ok,
           "max fd error = " + fmt(worst));
}

void criterion_6() {
    const int d = 5;
    const double mu = 0.48;
    const double cv_critical = std::sqrt(1.0 / (4.0 * mu * mu) - 1.0);  // 0.2917
    DegreeDistribution deg({{d, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});

    std::vector<double> cvs, r0s, pis;
    bool residual_ok = true;
    for (int i = 0; i <= 20; ++i) {
        double cv = i / 20.0;
        cvs.push_back(cv);
        r0s.push_back(mu * mu * (1.0 + cv * cv) * (d - 1));
        auto traits = make_two_point_trait(mu, cv, mu, cv, 1.0);
        auto sol = extinction_probabilities(deg, kernel, traits);
        residual_ok = residual_ok && sol.residual <= 1e-12;
        pis.push_back(sol.pi);
    }

    bool zero_below = true, positive_above = true;
    for (std::size_t i = 0; i < cvs.size(); ++i) {
        if (cvs[i] < cv_critical && pis[i] != 0.0) zero_below = false;
        if (cvs[i] > cv_critical && pis[i] <= 0.0) positive_above = false;
    }
    auto max_it = std::max_element(pis.begin(), pis.end());
    bool interior_max = max_it != pis.begin() && max_it != pis.end() - 1 &&
                        *max_it > pis.back();
    bool ok = strictly_increasing(r0s) && zero_below && positive_above &&
              interior_max && residual_ok;
    report(6, "two-group example: R0 monotone, pi thresholded and non-monotone",
           ok, "pi max = " + fmt(*max_it) + " at cv = " +
               fmt(cvs[std::size_t(max_it - pis.begin())]) +
               ", pi(1) = " + fmt(pis.back()));
}

void criterion_7() {
    DegreeDistribution deg({{5, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
        double cv = i / 10.0;
        auto traits = make_two_point_trait(0.48, cv, 0.48, cv, 1.0);
        auto general = extinction_probabilities(deg, kernel, traits, 1e-14);
        auto explicit_sol = two_type_extinction_explicit(5, 0.48, cv, 1e-14);
        worst = std::max(worst, std::abs(general.pi - explicit_sol.pi));
    }
    report(7, "general extinction solver equals explicit trinomial fixed point",
           worst <= 1e-12, "max |diff| = " + fmt(worst));
}

void criterion_8() {
    const int n = 100000;
    const int replicates = 2000;
    DegreeDistribution deg({{5, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});
    auto traits = make_two_point_trait(0.48, 0.5, 0.48, 0.5, 1.0);

    double pi = extinction_probabilities(deg, kernel, traits).pi;
    SimConfig config{n, deg, kernel, traits};
    auto stats = estimate_outbreak_stats(config, replicates, ThresholdRule{}, 20260825);

    double se = std::sqrt(pi * (1.0 - pi) / replicates);
    bool pi_ok = std::abs(stats.pi_hat - pi) <= 3.0 * se;
    bool tau_ok = std::abs(stats.tau_hat - pi) <= 0.01;
    report(8, "simulation matches analytic pi and tau at n=1e5",
           pi_ok && tau_ok,
           "pi = " + fmt(pi) + ", pi_hat = " + fmt(stats.pi_hat) +
               ", tau_hat = " + fmt(stats.tau_hat) + ", 3se = " + fmt(3.0 * se));
}

void criterion_9() {
    const int n = 5000;
    const int replicates = 10000;
    DegreeDistribution deg({{5, 1.0}});
    auto kernel = WeightKernel::degree_independent({{1, 1.0}});
    double trait = std::sqrt(0.2);
    TraitDistribution traits({{trait, trait, 1.0}});

    // ratio estimator of the generation-2 -> generation-3 growth factor
    double sum2 = 0.0, sum3 = 0.0;
    std::vector<std::pair<double, double>> pairs;
    for (int r = 0; r < replicates; ++r) {
        std::uint64_t seed = splitmix64(0xabcdefULL + r);
        auto attrs = sample_node_attributes(n, deg, kernel, traits, seed);
        auto [graph, diag] = build_network(attrs, seed + 1);
        int index = int(splitmix64(seed + 2) % n);
        auto res = simulate_outbreak(graph, attrs, index, seed + 3);
        double n2 = res.generation_sizes.size() > 1 ? res.generation_sizes[1] : 0;
        double n3 = res.generation_sizes.size() > 2 ? res.generation_sizes[2] : 0;
        sum2 += n2;
        sum3 += n3;
        pairs.emplace_back(n2, n3);
    }
    double ratio = sum3 / sum2;
    double ss = 0.0;
    for (const auto& [n2, n3] : pairs) {
        ss += (n3 - ratio * n2) * (n3 - ratio * n2);
    }
    double se = std::sqrt(ss) / sum2;
    bool ok = std::abs(ratio - 0.8) <= 3.0 * se;
    report(9, "early-generation growth factor equals R0 = 0.8", ok,
           "ratio = " + fmt(ratio) + ", 3se = " + fmt(3.0 * se));
}

void criterion_10() {
    auto all = xp::presets();
    auto column = [](const xp::ResultTable& t, const std::string& name) {
        std::size_t idx = std::size_t(
            std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin());
        std::vector<double> out;
        for (const auto& row : t.rows) out.push_back(row[idx].value());
        return out;
    };
    auto r0_fig3 = column(xp::run_experiment(all.at("fig3")), "r0");
    auto r0_fig4 = column(xp::run_experiment(all.at("fig4")), "r0");
    auto r0_fig5 = column(xp::run_experiment(all.at("fig5")), "r0");

    bool incr = strictly_increasing(r0_fig3);
    auto max4 = std::max_element(r0_fig4.begin(), r0_fig4.end());
    bool interior = max4 != r0_fig4.begin() && max4 != r0_fig4.end() - 1 &&
                    *max4 > r0_fig4.front() && *max4 > r0_fig4.back();
    std::vector<double> rev(r0_fig5.rbegin(), r0_fig5.rend());
    bool decr = strictly_increasing(rev);
    report(10, "degree-weight correlation examples: R0(cv) shapes", incr && interior && decr,
           std::string("negative corr increasing: ") + (incr ? "yes" : "no") +
               ", independent interior max: " + (interior ? "yes" : "no") +
               ", positive corr decreasing: " + (decr ? "yes" : "no"));
}

void criterion_11() {
    auto all = xp::presets();
    auto out_a = std::filesystem::temp_directory_path() / "epinet_accept_a";
    auto out_b = std::filesystem::temp_directory_path() / "epinet_accept_b";
    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);

    bool ok = true;
    for (auto& [id, config] : all) {
        config.mode = xp::Mode::kBoth;
        config.n = 1000;
        config.replicates = 100;
        auto csv_a = xp::emit_outputs(xp::run_experiment(config), id, out_a);
        auto csv_b = xp::emit_outputs(xp::run_experiment(config), id, out_b);
        std::ifstream fa(csv_a, std::ios::binary), fb(csv_b, std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str() || sa.str().empty()) {
            ok = false;
        }
    }
    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);
    report(11, "byte-identical CSV on repeated runs of every preset", ok);
}

}  // namespace

int main() {
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                failures, failures == 1 ? "" : "s");
    return failures;
}
