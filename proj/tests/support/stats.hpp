#pragma once

// Test-side statistics: chi-square p-values via boost.

#include <cmath>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace dsgtest {

inline double chi_square_upper_tail(double statistic, double dof)
{
    if (dof <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

/// Two-sample homogeneity test on paired histograms; bins empty in both are
/// skipped. Returns the p-value.
template <typename A, typename B>
double homogeneity_p_value(const A& a, const B& b)
{
    double na = 0.0, nb = 0.0;
    for (auto x : a) na += static_cast<double>(x);
    for (auto x : b) nb += static_cast<double>(x);
    if (na == 0.0 || nb == 0.0) return na == nb ? 1.0 : 0.0;
    double stat = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double xa = static_cast<double>(a[i]), xb = static_cast<double>(b[i]);
        const double pooled = (xa + xb) / (na + nb);
        if (pooled == 0.0) continue;
        const double ea = pooled * na, eb = pooled * nb;
        stat += (xa - ea) * (xa - ea) / ea + (xb - eb) * (xb - eb) / eb;
        ++bins;
    }
    return chi_square_upper_tail(stat, bins - 1);
}

/// Goodness of fit of observed counts against expected counts.
template <typename A>
double goodness_of_fit_p_value(const A& observed, const std::vector<double>& expected)
{
    double stat = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] <= 0.0) continue;
        const double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
        ++bins;
    }
    return chi_square_upper_tail(stat, bins - 1);
}

} // namespace dsgtest
