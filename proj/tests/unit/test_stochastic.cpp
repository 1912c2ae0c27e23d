#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "builders.hpp"
#include "dsg/error.hpp"
#include "dsg/random.hpp"
#include "stats.hpp"

using namespace dsgtest;

namespace {

RandomStream stream(std::uint64_t seed = 42, std::uint64_t key = 0)
{
    return RandomStream(seed, {stream_domain::test, key, 0});
}

/// Independent NHPP sampler: unit-rate exponential steps in cumulative
/// intensity, inverted through the piecewise-linear cumulative rate.
std::vector<double> inverse_cdf_arrivals(const std::array<double, 24>& per_hour, double horizon, std::mt19937_64& rng)
{
    std::exponential_distribution<double> unit(1.0);
    std::vector<double> out;
    double t = 0.0;
    double carry = unit(rng);
    while (t < horizon) {
        const auto h = static_cast<std::size_t>(std::fmod(t, 86400.0) / 3600.0);
        const double rate = per_hour[h] / 3600.0;
        const double bin_end = std::floor(t / 3600.0) * 3600.0 + 3600.0;
        const double mass = rate * (bin_end - t);
        if (carry < mass) {
            t += carry / rate;
            out.push_back(t);
            carry = unit(rng);
        } else {
            carry -= mass;
            t = bin_end;
        }
    }
    return out;
}

} // namespace

TEST_CASE("rate profile validation")
{
    std::vector<double> short_profile(23, 1.0);
    CHECK_THROWS_AS(RateProfile{short_profile}, InvalidRate);
    std::vector<double> negative(24, 1.0);
    negative[5] = -1.0;
    CHECK_THROWS_AS(RateProfile{negative}, InvalidRate);
    std::vector<double> nan(24, 1.0);
    nan[0] = std::nan("");
    CHECK_THROWS_AS(RateProfile{nan}, InvalidRate);

    std::vector<double> ramp(24);
    for (int h = 0; h < 24; ++h) ramp[h] = h;
    RateProfile p(ramp);
    CHECK(p.max_per_second() == doctest::Approx(23.0 / 3600.0));
    CHECK(p.rate_at(5 * 3600.0 + 1) == doctest::Approx(5.0 / 3600.0));
    CHECK(p.rate_at(86400.0 + 23 * 3600.0) == doctest::Approx(23.0 / 3600.0));
    CHECK(RateProfile::hour_of_day(86399.999) == 23);
    CHECK(RateProfile::hour_of_day(86400.0) == 0);
}

TEST_CASE("constant profile gives exponential inter-arrivals with the right mean")
{
    auto s = stream(7);
    const auto p = RateProfile::constant(6.0);
    double t = 0.0, sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double dt = next_nhpp_interarrival(p, t, s);
        CHECK(dt > 0.0);
        sum += dt;
        t += dt;
    }
    CHECK(sum / 10000.0 == doctest::Approx(600.0).epsilon(0.02));
}

TEST_CASE("zero-rate hours never receive arrivals")
{
    std::vector<double> half(24, 0.0);
    for (int h = 12; h < 24; ++h) half[h] = 30.0;
    RateProfile p(half);
    auto s = stream(3);
    double t = 0.0;
    for (int i = 0; i < 20000; ++i) {
        t += next_nhpp_interarrival(p, t, s);
        CHECK(RateProfile::hour_of_day(t) >= 12);
    }
}

TEST_CASE("inert profile raises ZeroRate")
{
    auto s = stream();
    CHECK_THROWS_AS(next_nhpp_interarrival(RateProfile::constant(0.0), 0.0, s), ZeroRate);
    CHECK(RateProfile::constant(0.0).inert());
}

TEST_CASE("streams are reproducible and independent of interleaving")
{
    auto a = stream(9, 1), b = stream(9, 1);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    auto x1 = stream(9, 1), y1 = stream(9, 2);
    std::vector<std::uint64_t> xs, ys;
    for (int i = 0; i < 50; ++i) xs.push_back(x1.next_u64());
    for (int i = 0; i < 50; ++i) ys.push_back(y1.next_u64());
    auto x2 = stream(9, 1), y2 = stream(9, 2);
    for (int i = 0; i < 50; ++i) {
        CHECK(y2.next_u64() == ys[i]);
        CHECK(x2.next_u64() == xs[i]);
    }
    CHECK(xs != ys);
    CHECK(stream(1, 1).next_u64() != stream(2, 1).next_u64());
}

TEST_CASE("uniform draws stay in range")
{
    auto s = stream(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        const double o = s.uniform_open();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK((o > 0.0 && o < 1.0));
    }
}

TEST_CASE("exponential sampling")
{
    auto s = stream(11);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double x = sample_exponential(3600.0, s);
        CHECK(x > 0.0);
        sum += x;
    }
    CHECK(sum / 100000.0 >= 3550.0);
    CHECK(sum / 100000.0 <= 3650.0);
    CHECK_THROWS_AS(sample_exponential(0.0, s), InvalidMean);
    CHECK_THROWS_AS(sample_exponential(-1.0, s), InvalidMean);

    auto r1 = stream(5), r2 = stream(5);
    for (int i = 0; i < 10; ++i) CHECK(sample_exponential(10.0, r1) == sample_exponential(10.0, r2));
}

TEST_CASE("exponential lifetimes are memoryless")
{
    auto s = stream(13);
    const int n = 400000;
    const double mean = 100.0, gap = 50.0, t = 80.0;
    int beyond_s = 0, beyond_st = 0, beyond_t = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_exponential(mean, s);
        if (x > gap) {
            ++beyond_s;
            if (x > gap + t) ++beyond_st;
        }
        if (x > t) ++beyond_t;
    }
    const double conditional = static_cast<double>(beyond_st) / beyond_s;
    const double marginal = static_cast<double>(beyond_t) / n;
    CHECK(conditional == doctest::Approx(marginal).epsilon(0.02));
    CHECK(marginal == doctest::Approx(std::exp(-t / mean)).epsilon(0.01));
}

TEST_CASE("bernoulli")
{
    auto s = stream(17);
    for (int i = 0; i < 1000; ++i) {
        CHECK(bernoulli(1.0, s));
        CHECK_FALSE(bernoulli(0.0, s));
    }
    int hits = 0;
    for (int i = 0; i < 100000; ++i) hits += bernoulli(0.4, s);
    CHECK(hits >= 39000);
    CHECK(hits <= 41000);
    CHECK_THROWS_AS(bernoulli(1.5, s), InvalidProbability);
    CHECK_THROWS_AS(bernoulli(-0.1, s), InvalidProbability);
}

TEST_CASE("balanced mean lifetime follows Little's law")
{
    const ClassId car = cls("car");
    CHECK(balanced_mean_lifetime(car, 0.01, 100.0) == doctest::Approx(10000.0));
    CHECK(balanced_mean_lifetime(car, 0.02, 100.0) == doctest::Approx(5000.0));
    CHECK_THROWS_AS(balanced_mean_lifetime(car, 0.0, 100.0), InvalidRate);
    CHECK_THROWS_AS(balanced_mean_lifetime(car, -1.0, 100.0), InvalidRate);
    CHECK_THROWS_AS(balanced_mean_lifetime(car, 1.0, 0.0), InvalidRate);
}

TEST_CASE("thinning agrees with an inverse-CDF sampler on a two-level profile")
{
    std::array<double, 24> per_hour{};
    for (int h = 0; h < 24; ++h) per_hour[h] = h < 8 ? 5.0 : 20.0;
    const double horizon = 2000.0 * 3600.0;

    RateProfile p(per_hour);
    auto s = stream(21);
    std::array<std::uint64_t, 24> thinning{};
    for (double t = next_nhpp_interarrival(p, 0.0, s); t < horizon; t += next_nhpp_interarrival(p, t, s))
        ++thinning[RateProfile::hour_of_day(t)];

    std::mt19937_64 rng(22);
    std::array<std::uint64_t, 24> oracle{};
    for (double t : inverse_cdf_arrivals(per_hour, horizon, rng)) ++oracle[RateProfile::hour_of_day(t)];

    // Collapse to the two rate levels and compare the samples.
    std::array<std::uint64_t, 2> a{}, b{};
    for (int h = 0; h < 24; ++h) {
        a[h < 8 ? 0 : 1] += thinning[h];
        b[h < 8 ? 0 : 1] += oracle[h];
    }
    CHECK(homogeneity_p_value(a, b) > 0.001);
    CHECK(homogeneity_p_value(thinning, oracle) > 0.001);
    const double expected_total = horizon / 86400.0 * (8 * 5.0 + 16 * 20.0);
    const double total = static_cast<double>(a[0] + a[1]);
    CHECK(std::abs(total - expected_total) < 4.0 * std::sqrt(expected_total));
}

TEST_CASE("interarrival stays positive at very large clock values")
{
    auto s = stream(1);
    const double t = 1e17;
    CHECK(next_nhpp_interarrival(RateProfile::constant(3600.0), t, s) > 0.0);
}
