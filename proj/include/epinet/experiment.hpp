#ifndef EPINET_EXPERIMENT_HPP
#define EPINET_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "epinet/distributions.hpp"

namespace epinet::experiment {

enum class Mode { kAnalytic, kSimulate, kBoth };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

/// Tagged degree distribution description.
/// kinds: constant {degree}, truncated_poisson {lambda, dmax},
/// explicit_pmf {pmf}.
struct DegreeSpec {
    std::string kind = "constant";
    int degree = 5;
    double lambda = 4.0;
    int dmax = 15;
    std::vector<std::pair<int, double>> pmf;

    DegreeDistribution build() const;
};

/// Tagged weight kernel description.
/// kinds: constant {weight}, two_point {w_low, w_high, p_low},
/// two_point_degree_power {w_low, w_high, coeff_a, coeff_b, exponent}
/// with q(w_low|d) = coeff_a + coeff_b * d^exponent,
/// neg_binomial {r, mu, mass_tol}, explicit_pmf {pmf}.
struct WeightSpec {
    std::string kind = "constant";
    int weight = 1;
    int w_low = 1;
    int w_high = 10;
    double p_low = 0.5;
    double coeff_a = 0.0;
    double coeff_b = 0.0;
    double exponent = 0.0;
    int r = 1;
    double mu = 10.0;
    double mass_tol = 1e-12;
    WeightPmf pmf;

    WeightKernel build(const DegreeDistribution& deg) const;
};

/// Tagged trait description.
/// kinds: constant {x, y}, two_point_conditional {mu_x, cv_x, mu_y, cv_y,
/// rho}, explicit_pmf {atoms}.
struct TraitSpec {
    std::string kind = "two_point_conditional";
    double x = 0.5;
    double y = 0.5;
    double mu_x = 0.5;
    double cv_x = 0.0;
    double mu_y = 0.5;
    double cv_y = 0.0;
    double rho = 0.0;
    std::vector<TraitAtom> atoms;

    TraitDistribution build() const;
};

/// Sweep over one parameter; values applied in order.
/// parameters: cv_xy (sets cv_x = cv_y), cv_x, cv_y, negbin_r.
struct Sweep {
    std::string parameter = "cv_xy";
    std::vector<double> values;
};

struct ExperimentConfig {
    std::string id;
    DegreeSpec degree;
    WeightSpec weight;
    TraitSpec trait;
    Sweep sweep;
    Mode mode = Mode::kAnalytic;
    bool compute_pi = false;  // adds analytic outbreak probability columns
    int n = 10000;
    int replicates = 1000;
    std::uint64_t seed = 1;
};

/// Config validation failure carrying one message per offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Throws ConfigError listing every invalid field.
void validate(const ExperimentConfig& config);

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
};

/// One row per sweep value; deterministic given the master seed.
ResultTable run_experiment(const ExperimentConfig& config);

/// Built-in parameterizations fig1..fig6, keyed by id.
std::map<std::string, ExperimentConfig> presets();

/// Writes <id>.csv and <id>.plot under out_dir; returns the CSV path.
std::filesystem::path emit_outputs(const ResultTable& table, const std::string& id,
                                   const std::filesystem::path& out_dir);

/// Serializes the CSV body (header + rows) exactly as emit_outputs writes it.
std::string to_csv(const ResultTable& table);

void to_json(nlohmann::json& j, const ExperimentConfig& config);
void from_json(const nlohmann::json& j, ExperimentConfig& config);

}  // namespace epinet::experiment

#endif
