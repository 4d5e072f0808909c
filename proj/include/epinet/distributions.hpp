#ifndef EPINET_DISTRIBUTIONS_HPP
#define EPINET_DISTRIBUTIONS_HPP

#include <map>
#include <utility>
#include <vector>

namespace epinet {

/// Mean, variance and coefficient of variation of a finite pmf.
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double cv = 0.0;
};

/// Computes exact moments of a finite pmf by direct summation.
/// Throws std::domain_error if the mean is zero while the variance is not
/// (cv undefined in that case). A degenerate pmf has cv = 0.
Moments pmf_moments(const std::vector<std::pair<double, double>>& pmf);

/// Finite-support degree distribution p_D(d) over non-negative integers.
/// Support entries are sorted ascending with distinct degrees and
/// probabilities summing to one.
class DegreeDistribution {
public:
    explicit DegreeDistribution(std::vector<std::pair<int, double>> support);

    const std::vector<std::pair<int, double>>& support() const { return support_; }
    double pmf(int degree) const;
    int max_degree() const { return support_.back().first; }
    Moments moments() const;
    /// Mean degree mu_D.
    double mean() const;

private:
    std::vector<std::pair<int, double>> support_;
};

/// Finite pmf over positive integer edge weights.
using WeightPmf = std::vector<std::pair<int, double>>;

Moments weight_pmf_moments(const WeightPmf& pmf);

/// Probability generating function G(s) = sum_w s^w P(W=w) by summation.
double weight_pgf(const WeightPmf& pmf, double s);

/// Conditional weight distribution q(w|d). A kernel either applies one row
/// to every degree or carries an explicit row per degree.
class WeightKernel {
public:
    static WeightKernel degree_independent(WeightPmf row);
    static WeightKernel per_degree(std::map<int, WeightPmf> rows);

    /// Row for a given degree; throws std::runtime_error if none exists.
    const WeightPmf& row(int degree) const;
    bool has_row(int degree) const;

    /// Union of all weights carried by any row, sorted ascending.
    std::vector<int> weight_support() const;

    /// Checks that a row exists for every degree d >= 1 with p_D(d) > 0.
    void validate_against(const DegreeDistribution& deg) const;

private:
    WeightKernel() = default;
    std::map<int, WeightPmf> rows_;
    WeightPmf shared_row_;  // used when degree-independent
    bool degree_independent_ = false;
};

struct TraitAtom {
    double x = 0.0;  // susceptibility
    double y = 0.0;  // infectivity
    double p = 0.0;
};

/// Finite joint distribution of (susceptibility, infectivity) on [0,1]^2.
/// Duplicate atoms are merged and zero-probability atoms dropped at
/// construction, so the atom list is minimal.
class TraitDistribution {
public:
    explicit TraitDistribution(std::vector<TraitAtom> atoms);

    const std::vector<TraitAtom>& atoms() const { return atoms_; }
    Moments x_moments() const;
    Moments y_moments() const;
    /// Pearson correlation of X and Y; 0 when either marginal is degenerate.
    double correlation() const;
    /// True when every atom has x == y (reciprocal transmission).
    bool symmetric() const;

private:
    std::vector<TraitAtom> atoms_;
};

/// Negative binomial weight parameters: W = number of trials until the
/// r-th success, success probability phi. Support {r, r+1, ...}.
struct NegBinParams {
    int r = 1;
    double phi = 1.0;
};

/// Four-atom trait distribution on {mu_x +- delta_x} x {mu_y +- delta_y}
/// with delta = mu * cv, P(lo,lo) = P(hi,hi) = (1+rho)/4 and
/// P(lo,hi) = P(hi,lo) = (1-rho)/4. Realized marginal means, CVs and
/// correlation equal the requested values exactly.
TraitDistribution make_two_point_trait(double mu_x, double cv_x, double mu_y,
                                       double cv_y, double rho);

/// Poisson(lambda) conditioned on D <= dmax, renormalized.
DegreeDistribution make_truncated_poisson(double lambda, int dmax);

/// Negative binomial pmf truncated at cumulative mass >= 1 - mass_tol and
/// renormalized. Requires r <= mu_w so that phi = r / mu_w <= 1.
WeightPmf make_negbin_pmf(int r, double mu_w, double mass_tol);

/// Degree-independent kernel wrapping make_negbin_pmf.
WeightKernel make_negbin_weight(int r, double mu_w, double mass_tol);

/// Closed-form pgf of the (untruncated) negative binomial,
/// G(s) = (s phi / (1 - s (1 - phi)))^r.
double negbin_pgf(double s, int r, double phi);

}  // namespace epinet

#endif
