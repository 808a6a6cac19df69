#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace attnet::stats {

struct TestResult {
    double statistic = 0.0;
    double p = 1.0;
    std::string method;
};

/// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

double normal_cdf(double z);
double normal_sf(double z);

/// Upper tail of the F(d1, d2) distribution. Throws InvalidDof unless d1, d2 >= 1.
double f_sf(double x, int d1, int d2);

/// Upper tail of chi-square with `dof` degrees of freedom (dof in {1, 2, ...}).
double chi2_sf(double x, int dof);

/// Two-sided tail of Student's t.
double t_two_sided(double t, double dof);

/// Pearson chi-square on a 2x2 table, Yates-corrected by default.
/// `table[r][c]`; throws ZeroMarginal when a row or column sums to 0.
TestResult chi2_test_2x2(const std::array<std::array<long long, 2>, 2>& table, bool continuity = true);

enum class MwMethod { Auto, Exact, Asymptotic };

/// Mann-Whitney U of the first sample (midranks for ties), two-sided p.
/// Auto uses exact enumeration when |a| + |b| <= 12, otherwise the normal
/// approximation with tie-corrected variance and continuity correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwMethod method = MwMethod::Auto);

/// Spearman rank correlation with a t-approximation p-value (n - 2 dof).
TestResult spearman(std::span<const double> x, std::span<const double> y);

/// Midranks (1-based, ties averaged).
std::vector<double> midranks(std::span<const double> v);

/// Mean absolute difference Gini: sum_ij |xi - xj| / (2 n^2 mean).
/// Throws NoOutEdges on an empty vector and ZeroMean when the values sum to 0.
double gini(std::span<const double> x);

}  // namespace attnet::stats
