#include "epinet/analytics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "epinet/epidemic.hpp"

namespace epinet {

TypeSpace TypeSpace::build(const DegreeDistribution& deg,
                           const TraitDistribution& traits) {
    TypeSpace space;
    for (const auto& [d, pd] : deg.support()) {
        if (pd <= 0.0) continue;
        for (const TraitAtom& a : traits.atoms()) {
            space.types.push_back({d, a.x, a.y, pd * a.p});
        }
    }
    return space;
}

namespace {

double kernel_prob(const WeightKernel& kernel, int w, int d) {
    if (d < 1) return 0.0;
    for (const auto& [wk, p] : kernel.row(d)) {
        if (wk == w) return p;
    }
    return 0.0;
}

/// Weights reachable along edges: union of rows over degrees d >= 1 with
/// positive degree mass.
std::vector<int> reachable_weights(const DegreeDistribution& deg,
                                   const WeightKernel& kernel) {
    std::vector<int> ws;
    for (const auto& [d, pd] : deg.support()) {
        if (d < 1 || pd <= 0.0) continue;
        for (const auto& [w, q] : kernel.row(d)) {
            if (q > 0.0) ws.push_back(w);
        }
    }
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    return ws;
}

/// Per-edge infect-and-connect probabilities q_{t1}(t2): the chance that a
/// given edge of an edge-infected t1-individual transmits to a t2-individual.
/// Row t1 of the offspring matrix is (d1 - 1) times this row.
Eigen::MatrixXd per_edge_offspring(const DegreeDistribution& deg,
                                   const WeightKernel& kernel,
                                   const TraitDistribution& traits,
                                   const TypeSpace& space) {
    kernel.validate_against(deg);
    const auto n = Eigen::Index(space.size());
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);

    for (int w : reachable_weights(deg, kernel)) {
        Eigen::VectorXd ptilde = edge_type_distribution(w, deg, kernel, traits, space);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& t1 = space.types[std::size_t(i)];
            if (t1.d < 1) continue;
            double qw = kernel_prob(kernel, w, t1.d);
            if (qw == 0.0) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto& t2 = space.types[std::size_t(j)];
                q(i, j) += qw * transmission_prob(w, t1.y, t2.x) * ptilde(j);
            }
        }
    }
    return q;
}

}  // namespace

Eigen::VectorXd edge_type_distribution(int w, const DegreeDistribution& deg,
                                       const WeightKernel& kernel,
                                       const TraitDistribution& traits,
                                       const TypeSpace& space) {
    double denom = 0.0;
    for (const auto& [d, pd] : deg.support()) {
        if (d < 1 || pd <= 0.0) continue;
        denom += kernel_prob(kernel, w, d) * d * pd;
    }
    if (denom <= 0.0) {
        throw std::domain_error("edge_type_distribution: weight " +
                                std::to_string(w) + " unreachable");
    }
    Eigen::VectorXd p(Eigen::Index(space.size()));
    for (std::size_t j = 0; j < space.size(); ++j) {
        const auto& t = space.types[j];
        p(Eigen::Index(j)) =
            t.d >= 1 ? kernel_prob(kernel, w, t.d) * t.d * t.p / denom : 0.0;
    }
    return p;
}

OffspringMatrix build_offspring_matrix(const DegreeDistribution& deg,
                                       const WeightKernel& kernel,
                                       const TraitDistribution& traits) {
    OffspringMatrix om;
    om.space = TypeSpace::build(deg, traits);
    Eigen::MatrixXd q = per_edge_offspring(deg, kernel, traits, om.space);
    om.m = q;
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        int d1 = om.space.types[std::size_t(i)].d;
        om.m.row(i) *= d1 >= 1 ? double(d1 - 1) : 0.0;
    }
    return om;
}

double spectral_radius(const Eigen::MatrixXd& m, double tol, int max_iter) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("spectral_radius: matrix not square");
    }
    if (m.size() == 0) return 0.0;
    double max_entry = m.maxCoeff();
    if (m.minCoeff() < 0.0) {
        throw std::invalid_argument("spectral_radius: negative entry");
    }
    if (max_entry == 0.0) return 0.0;

    // small shift keeps the iteration aperiodic on cyclic structures
    double eps = 1e-9 * max_entry;
    Eigen::MatrixXd a = m + eps * Eigen::MatrixXd::Identity(m.rows(), m.cols());

    Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows());
    double lambda_prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd av = a * v;
        double lambda = v.dot(av) / v.dot(v);
        double norm = av.lpNorm<Eigen::Infinity>();
        if (norm == 0.0) return 0.0;  // nilpotent along current direction
        v = av / norm;
        if (it > 0 && std::abs(lambda - lambda_prev) <= tol) {
            return lambda - eps;
        }
        lambda_prev = lambda;
    }
    throw std::runtime_error("spectral_radius: no convergence, last estimate " +
                             std::to_string(lambda_prev - eps));
}

double r0_unweighted_closed_form(double mu_x, double cv_x, double mu_y,
                                 double cv_y, double rho, double mu_d,
                                 double var_d) {
    if (mu_d <= 0.0) throw std::domain_error("r0_unweighted_closed_form: mu_d <= 0");
    return mu_x * mu_y * (1.0 + cv_x * cv_y * rho) *
           (mu_d + (var_d - mu_d) / mu_d);
}

double r0_fixed_degree_random_weight(int d, double p, const WeightPmf& weight_pmf) {
    if (d < 1) throw std::domain_error("r0_fixed_degree_random_weight: d < 1");
    return (d - 1) * (1.0 - weight_pgf(weight_pmf, 1.0 - p));
}

double r0_negbin(int d, double p, double r, double mu_w) {
    if (r <= 0.0 || r > mu_w) throw std::domain_error("r0_negbin: need 0 < r <= mu_w");
    if (p <= 0.0 || p >= 1.0) throw std::domain_error("r0_negbin: p out of (0,1)");
    double a = (1.0 - p) * r / mu_w;
    return (d - 1) * (1.0 - std::pow(a / (a + p), r));
}

double appendix_g(double z) {
    if (z < 0.0) throw std::domain_error("appendix_g: z < 0");
    return std::log1p(z) - z / (1.0 + z);
}

ExtinctionSolution extinction_probabilities(const DegreeDistribution& deg,
                                            const WeightKernel& kernel,
                                            const TraitDistribution& traits,
                                            double tol, long max_iter) {
    TypeSpace space = TypeSpace::build(deg, traits);
    const auto n = Eigen::Index(space.size());
    Eigen::MatrixXd q = per_edge_offspring(deg, kernel, traits, space);

    Eigen::VectorXd q0(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        q0(i) = 1.0 - q.row(i).sum();
    }

    Eigen::MatrixXd m = q;
    for (Eigen::Index i = 0; i < n; ++i) {
        int d1 = space.types[std::size_t(i)].d;
        m.row(i) *= d1 >= 1 ? double(d1 - 1) : 0.0;
    }

    ExtinctionSolution sol;
    sol.r0 = spectral_radius(m);

    // sigma = extinction probability per edge-infected type; iterate from 0
    // (pi' = 1) so the limit is the minimal fixed point.
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd next(n);
    double residual = 0.0;
    long it = 0;
    for (; it < max_iter; ++it) {
        for (Eigen::Index i = 0; i < n; ++i) {
            int d1 = space.types[std::size_t(i)].d;
            if (d1 <= 1) {
                next(i) = 1.0;  // no onward edges
            } else {
                next(i) = std::pow(q0(i) + q.row(i).dot(sigma), d1 - 1);
            }
        }
        residual = (next - sigma).lpNorm<Eigen::Infinity>();
        sigma = next;
        if (residual <= tol) break;
    }
    if (residual > tol) {
        throw std::runtime_error("extinction_probabilities: no convergence, residual " +
                                 std::to_string(residual));
    }
    sol.iterations = int(it + 1);
    sol.residual = residual;

    if (sol.r0 <= 1.0) {
        sol.pi_prime = Eigen::VectorXd::Zero(n);
        sol.pi = 0.0;
        return sol;
    }

    sol.pi_prime = Eigen::VectorXd::Ones(n) - sigma;
    // index case: type weighted by p_D * p_{X,Y}, with d susceptible neighbors
    double survive = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int d = space.types[std::size_t(i)].d;
        double escape = d >= 1 ? std::pow(q0(i) + q.row(i).dot(sigma), d) : 1.0;
        survive += space.types[std::size_t(i)].p * (1.0 - escape);
    }
    sol.pi = survive;
    return sol;
}

std::vector<std::vector<double>> two_type_offspring_pmf(int n_edges, double mu_i,
                                                        double mu1, double mu2) {
    if (n_edges < 0) throw std::domain_error("two_type_offspring_pmf: n_edges < 0");
    double a = mu_i * mu1 / 2.0;
    double b = mu_i * mu2 / 2.0;
    if (a < 0.0 || b < 0.0 || a + b > 1.0) {
        throw std::domain_error("two_type_offspring_pmf: invalid per-neighbor probabilities");
    }
    std::vector<std::vector<double>> pmf(n_edges + 1);
    for (int k = 0; k <= n_edges; ++k) pmf[k].assign(n_edges + 1 - k, 0.0);

    // multinomial coefficients n!/(k! l! (n-k-l)!) built from binomials
    std::vector<std::vector<double>> choose(n_edges + 1,
                                            std::vector<double>(n_edges + 1, 0.0));
    for (int i = 0; i <= n_edges; ++i) {
        choose[i][0] = 1.0;
        for (int j = 1; j <= i; ++j) {
            choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0.0);
        }
    }
    for (int k = 0; k <= n_edges; ++k) {
        for (int l = 0; k + l <= n_edges; ++l) {
            int rest = n_edges - k - l;
            double coeff = choose[n_edges][k] * choose[n_edges - k][l];
            pmf[k][l] = coeff * std::pow(a, k) * std::pow(b, l) *
                        std::pow(1.0 - a - b, rest);
        }
    }
    return pmf;
}

TwoTypeExtinction two_type_extinction_explicit(int d, double mu, double cv,
                                               double tol, long max_iter) {
    double mu1 = mu * (1.0 - cv);
    double mu2 = mu * (1.0 + cv);
    if (mu1 < 0.0 || mu2 > 1.0) {
        throw std::domain_error("two_type_extinction_explicit: trait outside [0,1]");
    }
    TwoTypeExtinction sol;
    double r0 = mu * mu * (1.0 + cv * cv) * (d - 1);
    if (r0 <= 1.0) return sol;  // subcritical: certain extinction

    auto p1 = two_type_offspring_pmf(d - 1, mu1, mu1, mu2);
    auto p2 = two_type_offspring_pmf(d - 1, mu2, mu1, mu2);
    auto eval = [](const std::vector<std::vector<double>>& pmf, int n_edges,
                    double s1, double s2) {
        double sum = 0.0;
        for (int k = 0; k <= n_edges; ++k) {
            for (int l = 0; k + l <= n_edges; ++l) {
                sum += std::pow(s1, k) * std::pow(s2, l) * pmf[k][l];
            }
        }
        return sum;
    };

    double s1 = 0.0;
    double s2 = 0.0;
    double residual = 0.0;
    long it = 0;
    for (; it < max_iter; ++it) {
        double n1 = eval(p1, d - 1, s1, s2);
        double n2 = eval(p2, d - 1, s1, s2);
        residual = std::max(std::abs(n1 - s1), std::abs(n2 - s2));
        s1 = n1;
        s2 = n2;
        if (residual <= tol) break;
    }
    if (residual > tol) {
        throw std::runtime_error("two_type_extinction_explicit: no convergence");
    }
    sol.iterations = int(it + 1);
    sol.residual = residual;
    sol.pi_prime1 = 1.0 - s1;
    sol.pi_prime2 = 1.0 - s2;

    auto q1 = two_type_offspring_pmf(d, mu1, mu1, mu2);
    auto q2 = two_type_offspring_pmf(d, mu2, mu1, mu2);
    sol.pi1 = 1.0 - eval(q1, d, s1, s2);
    sol.pi2 = 1.0 - eval(q2, d, s1, s2);
    sol.pi = 0.5 * (sol.pi1 + sol.pi2);
    return sol;
}

std::pair<double, double> jensen_gap(int d, double p, const WeightPmf& weight_pmf) {
    double r0_random = r0_fixed_degree_random_weight(d, p, weight_pmf);
    double mu_w = weight_pmf_moments(weight_pmf).mean;
    double r0_fixed = (d - 1) * (1.0 - std::pow(1.0 - p, mu_w));
    return {r0_random, r0_fixed};
}

}  // namespace epinet
