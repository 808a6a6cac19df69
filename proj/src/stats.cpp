#include "attnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "attnet/core.hpp"

namespace attnet::stats {

namespace {

double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// Continued fraction for I_x(a,b); converges for x < (a+1)/(a+b+2).
// Needs O(sqrt(max(a,b))) terms, so the cap grows with the shape parameters.
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const int max_iter = 200 + static_cast<int>(10.0 * std::sqrt(std::max(a, b)));
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw Error(Errc::NonConvergence, "incomplete beta continued fraction");
}

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x) {
    if (x <= 0) return 1.0;
    const double gln = log_gamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < 100000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0 && b > 0)) throw Error(Errc::InvalidArgument, "incomplete beta needs a, b > 0");
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    const double front = std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
                                  b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return clamp01(front * beta_cf(a, b, x) / a);
    return clamp01(1.0 - front * beta_cf(b, a, 1.0 - x) / b);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double f_sf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw Error(Errc::InvalidDof, "F(" + std::to_string(d1) + ", " + std::to_string(d2) + ")");
    if (std::isnan(x)) throw Error(Errc::InvalidArgument, "F statistic is NaN");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double dd1 = d1, dd2 = d2;
    return incomplete_beta(dd2 / 2.0, dd1 / 2.0, dd2 / (dd2 + dd1 * x));
}

double chi2_sf(double x, int dof) {
    if (dof < 1) throw Error(Errc::InvalidDof, "chi-square dof " + std::to_string(dof));
    if (x <= 0) return 1.0;
    if (dof == 1) return std::erfc(std::sqrt(x / 2.0));
    return clamp01(gamma_q(dof / 2.0, x / 2.0));
}

double t_two_sided(double t, double dof) {
    if (!(dof > 0)) throw Error(Errc::InvalidDof, "t dof must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

TestResult chi2_test_2x2(const std::array<std::array<long long, 2>, 2>& table, bool continuity) {
    double rows[2] = {0, 0}, cols[2] = {0, 0};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            if (table[r][c] < 0) throw Error(Errc::InvalidArgument, "negative cell count");
            rows[r] += static_cast<double>(table[r][c]);
            cols[c] += static_cast<double>(table[r][c]);
        }
    }
    if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0) {
        throw Error(Errc::ZeroMarginal, "2x2 table has an empty row or column");
    }
    const double total = rows[0] + rows[1];
    double stat = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const double expected = rows[r] * cols[c] / total;
            double dev = std::abs(static_cast<double>(table[r][c]) - expected);
            // Yates: shrink each deviation by 0.5 but never past zero.
            if (continuity) dev -= std::min(0.5, dev);
            stat += dev * dev / expected;
        }
    }
    return {stat, chi2_sf(stat, 1), continuity ? "pearson-chi2-yates" : "pearson-chi2"};
}

std::vector<double> midranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwMethod method) {
    if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "Mann-Whitney needs two non-empty samples");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);
    const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n1), 0.0);
    const double u = rank_sum - static_cast<double>(n1) * (n1 + 1) / 2.0;
    const double mu = static_cast<double>(n1) * n2 / 2.0;

    const bool exact = method == MwMethod::Exact || (method == MwMethod::Auto && n <= 12);
    if (exact) {
        // Distribution of twice the rank sum over all size-n1 subsets of the
        // pooled midranks; doubled midranks are integers.
        std::vector<int> twice(n);
        int max_sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            twice[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
            max_sum += twice[i];
        }
        std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
        ways[0][0] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = std::min(i + 1, n1); k >= 1; --k) {
                auto& dst = ways[k];
                const auto& src = ways[k - 1];
                for (int s = max_sum; s >= twice[i]; --s) dst[s] += src[s - twice[i]];
            }
        }
        const double offset = static_cast<double>(n1) * (n1 + 1);  // 2 * n1(n1+1)/2
        const double observed = std::abs(u - mu);
        double hits = 0.0, total = 0.0;
        for (int s = 0; s <= max_sum; ++s) {
            const double count = ways[n1][s];
            if (count == 0) continue;
            total += count;
            const double us = (s - offset) / 2.0;
            if (std::abs(us - mu) >= observed - 1e-9) hits += count;
        }
        return {u, clamp01(hits / total), "mann-whitney-exact"};
    }

    double tie_term = 0.0;
    {
        std::vector<double> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    const double nn = static_cast<double>(n);
    const double var = static_cast<double>(n1) * n2 / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (!(var > 0)) return {u, 1.0, "mann-whitney-normal"};
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return {u, clamp01(2.0 * normal_sf(z)), "mann-whitney-normal"};
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "spearman inputs differ in length");
    if (x.size() < 3) throw Error(Errc::InsufficientNodes, "spearman needs at least 3 observations");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean, dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw Error(Errc::ConstantInput, "spearman input is constant");
    const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    double p = 0.0;
    if (std::abs(rho) < 1.0) {
        const double t = rho * std::sqrt((n - 2.0) / (1.0 - rho * rho));
        p = t_two_sided(t, n - 2.0);
    }
    return {rho, p, "spearman-t"};
}

double gini(std::span<const double> x) {
    if (x.empty()) throw Error(Errc::NoOutEdges, "gini of an empty vector");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(total > 0)) throw Error(Errc::ZeroMean, "gini with zero mean");
    double diff = 0.0;
    for (std::size_t j = 1; j < v.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) diff += v[j] - v[i];
    }
    return diff / (static_cast<double>(v.size()) * total);
}

}  // namespace attnet::stats
