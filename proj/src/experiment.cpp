#include "epinet/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "epinet/analytics.hpp"
#include "epinet/epidemic.hpp"
#include "epinet/netgen.hpp"

namespace epinet::experiment {

Mode parse_mode(const std::string& name) {
    if (name == "analytic") return Mode::kAnalytic;
    if (name == "simulate") return Mode::kSimulate;
    if (name == "both") return Mode::kBoth;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::kAnalytic: return "analytic";
        case Mode::kSimulate: return "simulate";
        case Mode::kBoth: return "both";
    }
    return "analytic";
}

DegreeDistribution DegreeSpec::build() const {
    if (kind == "constant") {
        return DegreeDistribution({{degree, 1.0}});
    }
    if (kind == "truncated_poisson") {
        return make_truncated_poisson(lambda, dmax);
    }
    if (kind == "explicit_pmf") {
        return DegreeDistribution(pmf);
    }
    throw std::invalid_argument("DegreeSpec: unknown kind " + kind);
}

WeightKernel WeightSpec::build(const DegreeDistribution& deg) const {
    if (kind == "constant") {
        return WeightKernel::degree_independent({{weight, 1.0}});
    }
    if (kind == "two_point") {
        return WeightKernel::degree_independent(
            {{w_low, p_low}, {w_high, 1.0 - p_low}});
    }
    if (kind == "two_point_degree_power") {
        std::map<int, WeightPmf> rows;
        for (const auto& [d, p] : deg.support()) {
            if (d < 1) continue;
            double q_low = coeff_a + coeff_b * std::pow(double(d), exponent);
            if (q_low < 0.0 || q_low > 1.0) {
                throw std::invalid_argument(
                    "WeightSpec: q(w_low|d) outside [0,1] at d=" + std::to_string(d));
            }
            rows[d] = {{w_low, q_low}, {w_high, 1.0 - q_low}};
        }
        return WeightKernel::per_degree(std::move(rows));
    }
    if (kind == "neg_binomial") {
        return make_negbin_weight(r, mu, mass_tol);
    }
    if (kind == "explicit_pmf") {
        return WeightKernel::degree_independent(pmf);
    }
    throw std::invalid_argument("WeightSpec: unknown kind " + kind);
}

TraitDistribution TraitSpec::build() const {
    if (kind == "constant") {
        return TraitDistribution({{x, y, 1.0}});
    }
    if (kind == "two_point_conditional") {
        return make_two_point_trait(mu_x, cv_x, mu_y, cv_y, rho);
    }
    if (kind == "explicit_pmf") {
        return TraitDistribution(atoms);
    }
    throw std::invalid_argument("TraitSpec: unknown kind " + kind);
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid experiment config: " +
                         [&problems] {
                             std::string s;
                             for (const auto& p : problems) {
                                 if (!s.empty()) s += "; ";
                                 s += p;
                             }
                             return s;
                         }()),
      problems_(std::move(problems)) {}

void validate(const ExperimentConfig& config) {
    std::vector<std::string> problems;
    if (config.id.empty()) problems.push_back("id: empty");
    if (config.sweep.values.empty()) problems.push_back("sweep.values: empty");
    if (config.sweep.parameter != "cv_xy" && config.sweep.parameter != "cv_x" &&
        config.sweep.parameter != "cv_y" && config.sweep.parameter != "negbin_r") {
        problems.push_back("sweep.parameter: unknown '" + config.sweep.parameter + "'");
    }
    if (config.sweep.parameter == "negbin_r" && config.weight.kind != "neg_binomial") {
        problems.push_back("sweep.parameter: negbin_r requires neg_binomial weights");
    }
    bool simulates = config.mode != Mode::kAnalytic;
    if (simulates && config.n < 1) problems.push_back("n: must be >= 1 to simulate");
    if (simulates && config.replicates < 1) {
        problems.push_back("replicates: must be >= 1 to simulate");
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

namespace {

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, double value) {
    ExperimentConfig c = base;
    if (c.sweep.parameter == "cv_xy") {
        c.trait.cv_x = value;
        c.trait.cv_y = value;
    } else if (c.sweep.parameter == "cv_x") {
        c.trait.cv_x = value;
    } else if (c.sweep.parameter == "cv_y") {
        c.trait.cv_y = value;
    } else if (c.sweep.parameter == "negbin_r") {
        c.weight.r = int(std::lround(value));
    }
    return c;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        v[i] = lo + (hi - lo) * i / (count - 1);
    }
    return v;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& config) {
    validate(config);

    bool simulates = config.mode != Mode::kAnalytic;
    bool negbin_sweep = config.sweep.parameter == "negbin_r";
    bool sim_columns = simulates || config.compute_pi;

    ResultTable table;
    if (negbin_sweep) {
        table.columns = {"r", "cv_w"};
    } else if (config.sweep.parameter == "cv_x") {
        table.columns = {"cv_x"};
    } else if (config.sweep.parameter == "cv_y") {
        table.columns = {"cv_y"};
    } else {
        table.columns = {"cv"};
    }
    table.columns.push_back("r0");
    if (config.compute_pi) table.columns.push_back("pi_analytic");
    if (sim_columns) {
        table.columns.push_back("pi_hat");
        table.columns.push_back("tau_hat");
    }

    for (std::size_t g = 0; g < config.sweep.values.size(); ++g) {
        ExperimentConfig point = apply_sweep_value(config, config.sweep.values[g]);
        DegreeDistribution deg = point.degree.build();
        WeightKernel kernel = point.weight.build(deg);
        TraitDistribution traits = point.trait.build();

        std::vector<std::optional<double>> row;
        row.emplace_back(config.sweep.values[g]);
        if (negbin_sweep) {
            row.emplace_back(weight_pmf_moments(kernel.row(1)).cv);
        }
        row.emplace_back(spectral_radius(build_offspring_matrix(deg, kernel, traits).m));
        if (config.compute_pi) {
            row.emplace_back(extinction_probabilities(deg, kernel, traits).pi);
        }
        if (sim_columns) {
            if (simulates) {
                SimConfig sim{point.n, deg, kernel, traits};
                OutbreakStats stats = estimate_outbreak_stats(
                    sim, point.replicates, ThresholdRule{},
                    splitmix64(point.seed ^ (0x65787000ULL + g)));
                row.emplace_back(stats.pi_hat);
                if (stats.major_count > 0) {
                    row.emplace_back(stats.tau_hat);
                } else {
                    row.emplace_back(std::nullopt);
                }
            } else {
                row.emplace_back(std::nullopt);
                row.emplace_back(std::nullopt);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::map<std::string, ExperimentConfig> presets() {
    std::map<std::string, ExperimentConfig> out;

    {  // unweighted 5-regular network, positively correlated traits
        ExperimentConfig c;
        c.id = "fig1";
        c.degree = {.kind = "constant", .degree = 5};
        c.weight = {.kind = "constant", .weight = 1};
        c.trait.kind = "two_point_conditional";
        c.trait.mu_x = c.trait.mu_y = 0.2;
        c.trait.rho = 0.7;
        c.sweep = {"cv_xy", linspace(0.0, 1.0, 21)};
        out[c.id] = c;
    }
    {  // 5-regular, negative binomial weights with fixed mean, fixed traits
        ExperimentConfig c;
        c.id = "fig2";
        c.degree = {.kind = "constant", .degree = 5};
        c.weight.kind = "neg_binomial";
        c.weight.mu = 10.0;
        c.trait.kind = "constant";
        c.trait.x = c.trait.y = std::sqrt(0.5);
        c.sweep = {"negbin_r", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
        out[c.id] = c;
    }
    {  // degree and weight negatively correlated
        ExperimentConfig c;
        c.id = "fig3";
        c.degree = {.kind = "truncated_poisson", .lambda = 4.0, .dmax = 15};
        c.weight.kind = "two_point_degree_power";
        c.weight.w_low = 1;
        c.weight.w_high = 10;
        c.weight.coeff_a = 1.0;   // q(1|d) = 1 - d^-2
        c.weight.coeff_b = -1.0;
        c.weight.exponent = -2.0;
        c.trait.kind = "two_point_conditional";
        c.trait.mu_x = c.trait.mu_y = 0.5;
        c.trait.rho = 0.8;
        c.sweep = {"cv_xy", linspace(0.0, 1.0, 21)};
        out[c.id] = c;
    }
    {  // degree-independent two-point weights, infectivity cv fixed at 0.3
        ExperimentConfig c;
        c.id = "fig4";
        c.degree = {.kind = "truncated_poisson", .lambda = 4.0, .dmax = 15};
        c.weight.kind = "two_point";
        c.weight.w_low = 1;
        c.weight.w_high = 10;
        c.weight.p_low = 0.5;
        c.trait.kind = "two_point_conditional";
        c.trait.mu_x = c.trait.mu_y = 0.5;
        c.trait.cv_y = 0.3;
        c.trait.rho = 0.8;
        c.sweep = {"cv_x", linspace(0.0, 1.0, 21)};
        out[c.id] = c;
    }
    {  // degree and weight positively correlated
        ExperimentConfig c = out["fig3"];
        c.id = "fig5";
        c.weight.coeff_a = 0.0;   // q(1|d) = d^-2
        c.weight.coeff_b = 1.0;
        out[c.id] = c;
    }
    {  // two symmetric trait groups on a 5-regular unweighted network
        ExperimentConfig c;
        c.id = "fig6";
        c.degree = {.kind = "constant", .degree = 5};
        c.weight = {.kind = "constant", .weight = 1};
        c.trait.kind = "two_point_conditional";
        c.trait.mu_x = c.trait.mu_y = 0.48;
        c.trait.rho = 1.0;
        c.sweep = {"cv_xy", linspace(0.0, 1.0, 21)};
        c.compute_pi = true;
        out[c.id] = c;
    }
    return out;
}

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    char buf[64];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (row[i].has_value()) {
                std::snprintf(buf, sizeof(buf), "%.12g", *row[i]);
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

std::filesystem::path emit_outputs(const ResultTable& table, const std::string& id,
                                   const std::filesystem::path& out_dir) {
    if (table.columns.empty() || table.rows.empty()) {
        throw ConfigError({"table: empty result table"});
    }
    std::filesystem::create_directories(out_dir);
    std::filesystem::path csv_path = out_dir / (id + ".csv");
    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
        csv << to_csv(table);
    }
    std::filesystem::path plot_path = out_dir / (id + ".plot");
    {
        std::ofstream plot(plot_path);
        if (!plot) throw std::runtime_error("cannot write " + plot_path.string());
        plot << "# gnuplot script for " << id << "\n"
             << "set datafile separator ','\n"
             << "set key autotitle columnhead\n"
             << "set xlabel '" << table.columns[0] << "'\n"
             << "plot";
        for (std::size_t c = 1; c < table.columns.size(); ++c) {
            plot << (c == 1 ? " " : ", ") << "'" << id << ".csv' using 1:"
                 << (c + 1) << " with linespoints";
        }
        plot << "\n";
    }
    return csv_path;
}

void to_json(nlohmann::json& j, const ExperimentConfig& config) {
    j = nlohmann::json{
        {"id", config.id},
        {"mode", mode_name(config.mode)},
        {"compute_pi", config.compute_pi},
        {"n", config.n},
        {"replicates", config.replicates},
        {"seed", config.seed},
        {"sweep", {{"parameter", config.sweep.parameter},
                   {"values", config.sweep.values}}},
    };
    nlohmann::json deg{{"kind", config.degree.kind}};
    if (config.degree.kind == "constant") {
        deg["degree"] = config.degree.degree;
    } else if (config.degree.kind == "truncated_poisson") {
        deg["lambda"] = config.degree.lambda;
        deg["dmax"] = config.degree.dmax;
    } else if (config.degree.kind == "explicit_pmf") {
        deg["pmf"] = config.degree.pmf;
    }
    j["degree"] = deg;

    nlohmann::json wt{{"kind", config.weight.kind}};
    if (config.weight.kind == "constant") {
        wt["weight"] = config.weight.weight;
    } else if (config.weight.kind == "two_point") {
        wt["w_low"] = config.weight.w_low;
        wt["w_high"] = config.weight.w_high;
        wt["p_low"] = config.weight.p_low;
    } else if (config.weight.kind == "two_point_degree_power") {
        wt["w_low"] = config.weight.w_low;
        wt["w_high"] = config.weight.w_high;
        wt["coeff_a"] = config.weight.coeff_a;
        wt["coeff_b"] = config.weight.coeff_b;
        wt["exponent"] = config.weight.exponent;
    } else if (config.weight.kind == "neg_binomial") {
        wt["r"] = config.weight.r;
        wt["mu"] = config.weight.mu;
        wt["mass_tol"] = config.weight.mass_tol;
    } else if (config.weight.kind == "explicit_pmf") {
        wt["pmf"] = config.weight.pmf;
    }
    j["weight"] = wt;

    nlohmann::json tr{{"kind", config.trait.kind}};
    if (config.trait.kind == "constant") {
        tr["x"] = config.trait.x;
        tr["y"] = config.trait.y;
    } else if (config.trait.kind == "two_point_conditional") {
        tr["mu_x"] = config.trait.mu_x;
        tr["cv_x"] = config.trait.cv_x;
        tr["mu_y"] = config.trait.mu_y;
        tr["cv_y"] = config.trait.cv_y;
        tr["rho"] = config.trait.rho;
    } else if (config.trait.kind == "explicit_pmf") {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : config.trait.atoms) {
            atoms.push_back({{"x", a.x}, {"y", a.y}, {"p", a.p}});
        }
        tr["atoms"] = atoms;
    }
    j["trait"] = tr;
}

void from_json(const nlohmann::json& j, ExperimentConfig& config) {
    config.id = j.at("id").get<std::string>();
    config.mode = parse_mode(j.value("mode", "analytic"));
    config.compute_pi = j.value("compute_pi", false);
    config.n = j.value("n", config.n);
    config.replicates = j.value("replicates", config.replicates);
    config.seed = j.value("seed", config.seed);
    const auto& sw = j.at("sweep");
    config.sweep.parameter = sw.at("parameter").get<std::string>();
    config.sweep.values = sw.at("values").get<std::vector<double>>();

    const auto& deg = j.at("degree");
    config.degree.kind = deg.at("kind").get<std::string>();
    config.degree.degree = deg.value("degree", config.degree.degree);
    config.degree.lambda = deg.value("lambda", config.degree.lambda);
    config.degree.dmax = deg.value("dmax", config.degree.dmax);
    if (deg.contains("pmf")) {
        config.degree.pmf = deg["pmf"].get<std::vector<std::pair<int, double>>>();
    }

    const auto& wt = j.at("weight");
    config.weight.kind = wt.at("kind").get<std::string>();
    config.weight.weight = wt.value("weight", config.weight.weight);
    config.weight.w_low = wt.value("w_low", config.weight.w_low);
    config.weight.w_high = wt.value("w_high", config.weight.w_high);
    config.weight.p_low = wt.value("p_low", config.weight.p_low);
    config.weight.coeff_a = wt.value("coeff_a", config.weight.coeff_a);
    config.weight.coeff_b = wt.value("coeff_b", config.weight.coeff_b);
    config.weight.exponent = wt.value("exponent", config.weight.exponent);
    config.weight.r = wt.value("r", config.weight.r);
    config.weight.mu = wt.value("mu", config.weight.mu);
    config.weight.mass_tol = wt.value("mass_tol", config.weight.mass_tol);
    if (wt.contains("pmf")) {
        config.weight.pmf = wt["pmf"].get<WeightPmf>();
    }

    const auto& tr = j.at("trait");
    config.trait.kind = tr.at("kind").get<std::string>();
    config.trait.x = tr.value("x", config.trait.x);
    config.trait.y = tr.value("y", config.trait.y);
    config.trait.mu_x = tr.value("mu_x", config.trait.mu_x);
    config.trait.cv_x = tr.value("cv_x", config.trait.cv_x);
    config.trait.mu_y = tr.value("mu_y", config.trait.mu_y);
    config.trait.cv_y = tr.value("cv_y", config.trait.cv_y);
    config.trait.rho = tr.value("rho", config.trait.rho);
    if (tr.contains("atoms")) {
        config.trait.atoms.clear();
        for (const auto& a : tr["atoms"]) {
            config.trait.atoms.push_back(
                {a.at("x").get<double>(), a.at("y").get<double>(),
                 a.at("p").get<double>()});
        }
    }
}

}  // namespace epinet::experiment
