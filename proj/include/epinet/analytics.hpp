#ifndef EPINET_ANALYTICS_HPP
#define EPINET_ANALYTICS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "epinet/distributions.hpp"

namespace epinet {

/// Enumerated finite type space of (degree, susceptibility, infectivity)
/// combinations with joint probability p_D(d) * p_{X,Y}(x,y).
struct TypeSpace {
    struct Type {
        int d;
        double x;
        double y;
        double p;
    };

    std::vector<Type> types;

    static TypeSpace build(const DegreeDistribution& deg,
                           const TraitDistribution& traits);
    std::size_t size() const { return types.size(); }
};

/// Distribution of the type found at the far end of a weight-w edge:
/// proportional to q(w|d) * d * p_D(d) * p_{X,Y}(x,y). Throws
/// std::domain_error when no positive-degree mass carries weight w.
Eigen::VectorXd edge_type_distribution(int w, const DegreeDistribution& deg,
                                       const WeightKernel& kernel,
                                       const TraitDistribution& traits,
                                       const TypeSpace& space);

/// Mean offspring matrix: expected infections of each type caused by an
/// edge-infected individual of each type during the early phase.
struct OffspringMatrix {
    TypeSpace space;
    Eigen::MatrixXd m;
};

OffspringMatrix build_offspring_matrix(const DegreeDistribution& deg,
                                       const WeightKernel& kernel,
                                       const TraitDistribution& traits);

/// Perron root of a non-negative square matrix by power iteration with
/// infinity-norm normalization. A small diagonal shift breaks possible
/// periodicity; the shift is subtracted from the returned value.
double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-10,
                       int max_iter = 1000000);

/// R0 for an unweighted network from means, CVs, correlation and the
/// degree moments: mu_X mu_Y (1 + CV_X CV_Y rho) (mu_D + (var_D - mu_D)/mu_D).
double r0_unweighted_closed_form(double mu_x, double cv_x, double mu_y,
                                 double cv_y, double rho, double mu_d,
                                 double var_d);

/// R0 = (d-1)(1 - G(1-p)) for degree-regular networks with iid edge
/// weights and per-contact transmission probability p.
double r0_fixed_degree_random_weight(int d, double p, const WeightPmf& weight_pmf);

/// Negative-binomial specialization of the above with fixed mean weight;
/// r may be any positive real for monotonicity studies.
double r0_negbin(int d, double p, double r, double mu_w);

/// g(z) = log(1+z) - z/(1+z); positive for z > 0, with g(0) = 0.
double appendix_g(double z);

/// Branching-process extinction fixed point over the full type space.
struct ExtinctionSolution {
    Eigen::VectorXd pi_prime;  // per-type major-outbreak probability (edge-infected)
    double pi = 0.0;           // major-outbreak probability, uniform index case
    int iterations = 0;
    double residual = 0.0;
    double r0 = 0.0;
};

ExtinctionSolution extinction_probabilities(const DegreeDistribution& deg,
                                            const WeightKernel& kernel,
                                            const TraitDistribution& traits,
                                            double tol = 1e-12,
                                            long max_iter = 1000000);

/// Trinomial offspring pmf for the two-type equal-mix model: probability
/// that an individual with traits mu_i and n_edges susceptible neighbors
/// infects k type-1 and l type-2 individuals. pmf[k][l], k + l <= n_edges.
std::vector<std::vector<double>> two_type_offspring_pmf(int n_edges, double mu_i,
                                                        double mu1, double mu2);

/// Two-type equal-mix extinction probabilities solved directly from the
/// explicit trinomial sums (degree-regular unweighted network, types
/// mu(1 -+ cv) at equal proportions with x == y).
struct TwoTypeExtinction {
    double pi_prime1 = 0.0;
    double pi_prime2 = 0.0;
    double pi1 = 0.0;
    double pi2 = 0.0;
    double pi = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

TwoTypeExtinction two_type_extinction_explicit(int d, double mu, double cv,
                                               double tol = 1e-12,
                                               long max_iter = 1000000);

/// Compares R0 under random weights against the fixed-weight comparator
/// with the same mean: returns (r0_random, r0_fixed_mean); the first is
/// never larger (Jensen).
std::pair<double, double> jensen_gap(int d, double p, const WeightPmf& weight_pmf);

}  // namespace epinet

#endif
