#include "epinet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace epinet {

namespace {

constexpr double kPmfSumTol = 1e-12;

void check_pmf_sum(double sum, const char* what) {
    if (std::abs(sum - 1.0) > kPmfSumTol) {
        throw std::invalid_argument(std::string(what) +
                                    ": probabilities sum to " + std::to_string(sum));
    }
}

}  // namespace

Moments pmf_moments(const std::vector<std::pair<double, double>>& pmf) {
    double mean = 0.0;
    double m2 = 0.0;
    for (const auto& [v, p] : pmf) {
        mean += v * p;
        m2 += v * v * p;
    }
    double variance = std::max(0.0, m2 - mean * mean);
    Moments m{mean, variance, 0.0};
    if (variance == 0.0) {
        m.cv = 0.0;
    } else if (mean == 0.0) {
        throw std::domain_error("cv undefined: zero mean with positive variance");
    } else {
        m.cv = std::sqrt(variance) / mean;
    }
    return m;
}

DegreeDistribution::DegreeDistribution(std::vector<std::pair<int, double>> support)
    : support_(std::move(support)) {
    if (support_.empty()) {
        throw std::invalid_argument("DegreeDistribution: empty support");
    }
    std::sort(support_.begin(), support_.end());
    double sum = 0.0;
    int prev = -1;
    for (const auto& [d, p] : support_) {
        if (d < 0) throw std::invalid_argument("DegreeDistribution: negative degree");
        if (d == prev) throw std::invalid_argument("DegreeDistribution: duplicate degree");
        if (p < 0.0) throw std::invalid_argument("DegreeDistribution: negative probability");
        prev = d;
        sum += p;
    }
    check_pmf_sum(sum, "DegreeDistribution");
}

double DegreeDistribution::pmf(int degree) const {
    auto it = std::lower_bound(support_.begin(), support_.end(),
                               std::make_pair(degree, -1.0));
    if (it != support_.end() && it->first == degree) return it->second;
    return 0.0;
}

Moments DegreeDistribution::moments() const {
    std::vector<std::pair<double, double>> pmf;
    pmf.reserve(support_.size());
    for (const auto& [d, p] : support_) pmf.emplace_back(double(d), p);
    return pmf_moments(pmf);
}

double DegreeDistribution::mean() const {
    double mu = 0.0;
    for (const auto& [d, p] : support_) mu += d * p;
    return mu;
}

Moments weight_pmf_moments(const WeightPmf& pmf) {
    std::vector<std::pair<double, double>> v;
    v.reserve(pmf.size());
    for (const auto& [w, p] : pmf) v.emplace_back(double(w), p);
    return pmf_moments(v);
}

double weight_pgf(const WeightPmf& pmf, double s) {
    double g = 0.0;
    for (const auto& [w, p] : pmf) g += p * std::pow(s, w);
    return g;
}

namespace {

void validate_weight_row(const WeightPmf& row, const char* what) {
    if (row.empty()) throw std::invalid_argument(std::string(what) + ": empty weight row");
    double sum = 0.0;
    for (const auto& [w, p] : row) {
        if (w < 1) throw std::invalid_argument(std::string(what) + ": weight < 1");
        if (p < 0.0) throw std::invalid_argument(std::string(what) + ": negative probability");
        sum += p;
    }
    check_pmf_sum(sum, what);
}

}  // namespace

WeightKernel WeightKernel::degree_independent(WeightPmf row) {
    validate_weight_row(row, "WeightKernel");
    WeightKernel k;
    k.shared_row_ = std::move(row);
    k.degree_independent_ = true;
    return k;
}

WeightKernel WeightKernel::per_degree(std::map<int, WeightPmf> rows) {
    if (rows.empty()) throw std::invalid_argument("WeightKernel: no rows");
    for (const auto& [d, row] : rows) {
        if (d < 1) throw std::invalid_argument("WeightKernel: row for degree < 1");
        validate_weight_row(row, "WeightKernel");
    }
    WeightKernel k;
    k.rows_ = std::move(rows);
    return k;
}

const WeightPmf& WeightKernel::row(int degree) const {
    if (degree_independent_) return shared_row_;
    auto it = rows_.find(degree);
    if (it == rows_.end()) {
        throw std::runtime_error("WeightKernel: no row for degree " +
                                 std::to_string(degree));
    }
    return it->second;
}

bool WeightKernel::has_row(int degree) const {
    return degree_independent_ || rows_.count(degree) > 0;
}

std::vector<int> WeightKernel::weight_support() const {
    std::vector<int> ws;
    auto add_row = [&ws](const WeightPmf& row) {
        for (const auto& [w, p] : row) {
            if (p > 0.0) ws.push_back(w);
        }
    };
    if (degree_independent_) {
        add_row(shared_row_);
    } else {
        for (const auto& [d, row] : rows_) add_row(row);
    }
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    return ws;
}

void WeightKernel::validate_against(const DegreeDistribution& deg) const {
    for (const auto& [d, p] : deg.support()) {
        if (d >= 1 && p > 0.0 && !has_row(d)) {
            throw std::runtime_error("WeightKernel: missing row for degree " +
                                     std::to_string(d));
        }
    }
}

TraitDistribution::TraitDistribution(std::vector<TraitAtom> atoms) {
    double sum = 0.0;
    for (const auto& a : atoms) {
        if (a.x < 0.0 || a.x > 1.0 || a.y < 0.0 || a.y > 1.0) {
            throw std::domain_error("TraitDistribution: atom outside [0,1]^2");
        }
        if (a.p < 0.0) throw std::domain_error("TraitDistribution: negative probability");
        sum += a.p;
    }
    check_pmf_sum(sum, "TraitDistribution");
    // merge duplicates, drop zero-mass atoms
    for (const auto& a : atoms) {
        if (a.p == 0.0) continue;
        bool merged = false;
        for (auto& b : atoms_) {
            if (b.x == a.x && b.y == a.y) {
                b.p += a.p;
                merged = true;
                break;
            }
        }
        if (!merged) atoms_.push_back(a);
    }
    if (atoms_.empty()) throw std::invalid_argument("TraitDistribution: no mass");
}

Moments TraitDistribution::x_moments() const {
    std::vector<std::pair<double, double>> pmf;
    for (const auto& a : atoms_) pmf.emplace_back(a.x, a.p);
    return pmf_moments(pmf);
}

Moments TraitDistribution::y_moments() const {
    std::vector<std::pair<double, double>> pmf;
    for (const auto& a : atoms_) pmf.emplace_back(a.y, a.p);
    return pmf_moments(pmf);
}

double TraitDistribution::correlation() const {
    Moments mx = x_moments();
    Moments my = y_moments();
    if (mx.variance == 0.0 || my.variance == 0.0) return 0.0;
    double exy = 0.0;
    for (const auto& a : atoms_) exy += a.x * a.y * a.p;
    double cov = exy - mx.mean * my.mean;
    return cov / std::sqrt(mx.variance * my.variance);
}

bool TraitDistribution::symmetric() const {
    for (const auto& a : atoms_) {
        if (a.x != a.y) return false;
    }
    return true;
}

TraitDistribution make_two_point_trait(double mu_x, double cv_x, double mu_y,
                                       double cv_y, double rho) {
    if (mu_x <= 0.0 || mu_x >= 1.0 || mu_y <= 0.0 || mu_y >= 1.0) {
        throw std::domain_error("make_two_point_trait: means must lie in (0,1)");
    }
    if (cv_x < 0.0 || cv_y < 0.0) {
        throw std::domain_error("make_two_point_trait: negative cv");
    }
    if (std::abs(rho) > 1.0) {
        throw std::domain_error("make_two_point_trait: |rho| > 1");
    }
    double dx = mu_x * cv_x;
    double dy = mu_y * cv_y;
    if (mu_x + dx > 1.0 || mu_x - dx < 0.0 || mu_y + dy > 1.0 || mu_y - dy < 0.0) {
        throw std::domain_error("make_two_point_trait: atom outside [0,1]");
    }
    double plike = (1.0 + rho) / 4.0;
    double punlike = (1.0 - rho) / 4.0;
    std::vector<TraitAtom> atoms{
        {mu_x - dx, mu_y - dy, plike},
        {mu_x + dx, mu_y + dy, plike},
        {mu_x - dx, mu_y + dy, punlike},
        {mu_x + dx, mu_y - dy, punlike},
    };
    return TraitDistribution(std::move(atoms));
}

DegreeDistribution make_truncated_poisson(double lambda, int dmax) {
    if (lambda <= 0.0) throw std::domain_error("make_truncated_poisson: lambda <= 0");
    if (dmax < 0) throw std::domain_error("make_truncated_poisson: dmax < 0");
    std::vector<std::pair<int, double>> support;
    double term = std::exp(-lambda);  // P(D = 0)
    double z = 0.0;
    for (int d = 0; d <= dmax; ++d) {
        support.emplace_back(d, term);
        z += term;
        term *= lambda / (d + 1);
    }
    for (auto& [d, p] : support) p /= z;
    return DegreeDistribution(std::move(support));
}

WeightPmf make_negbin_pmf(int r, double mu_w, double mass_tol) {
    if (r < 1) throw std::domain_error("make_negbin_pmf: r < 1");
    if (r > mu_w) throw std::domain_error("make_negbin_pmf: r > mu_w");
    if (mass_tol <= 0.0 || mass_tol >= 1.0) {
        throw std::domain_error("make_negbin_pmf: mass_tol out of (0,1)");
    }
    double phi = r / mu_w;
    WeightPmf pmf;
    // P(W=w) = C(w-1, r-1) phi^r (1-phi)^(w-r), w >= r
    // Stop once both the tail mass and the tail's first-moment contribution
    // are small enough that the renormalized mean stays within
    // mass_tol * mu_w of r/phi.
    double term = std::pow(phi, r);  // w = r
    double mass = 0.0;
    double wsum = 0.0;
    for (int w = r;; ++w) {
        pmf.emplace_back(w, term);
        mass += term;
        wsum += term * w;
        if (1.0 - mass <= 0.25 * mass_tol && mu_w - wsum <= 0.25 * mass_tol * mu_w) {
            break;
        }
        term *= double(w) / (w - r + 1) * (1.0 - phi);
    }
    for (auto& [w, p] : pmf) p /= mass;
    return pmf;
}

WeightKernel make_negbin_weight(int r, double mu_w, double mass_tol) {
    return WeightKernel::degree_independent(make_negbin_pmf(r, mu_w, mass_tol));
}

double negbin_pgf(double s, int r, double phi) {
    if (s == 0.0) return 0.0;  // support starts at w = r >= 1
    return std::pow(s * phi / (1.0 - s * (1.0 - phi)), r);
}

}  // namespace epinet
