#include "dsg/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsg/error.hpp"

namespace dsg {

RandomStream::RandomStream(std::uint64_t seed, StreamId id) : id_(id)
{
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ id.domain);
    h = mix64(h ^ id.key_a);
    h = mix64(h ^ id.key_b);
    engine_.seed(h);
}

RateProfile::RateProfile(std::span<const double> hourly_rates)
{
    if (hourly_rates.size() != 24)
        throw InvalidRate("rate profile needs 24 hourly rates, got " + std::to_string(hourly_rates.size()));
    for (std::size_t h = 0; h < 24; ++h) {
        const double r = hourly_rates[h];
        if (!std::isfinite(r) || r < 0.0)
            throw InvalidRate("hourly rate " + std::to_string(h) + " must be finite and >= 0");
        hourly_[h] = r;
        per_second_[h] = r / kSecondsPerHour;
        max_per_second_ = std::max(max_per_second_, per_second_[h]);
    }
}

RateProfile RateProfile::constant(double per_hour)
{
    std::array<double, 24> r;
    r.fill(per_hour);
    return RateProfile(r);
}

double RateProfile::mean_per_second() const noexcept
{
    double s = 0.0;
    for (double r : per_second_) s += r;
    return s / 24.0;
}

std::size_t RateProfile::hour_of_day(double t) noexcept
{
    double tod = std::fmod(t, kSecondsPerDay);
    if (tod < 0.0) tod += kSecondsPerDay;
    const auto h = static_cast<std::size_t>(tod / kSecondsPerHour);
    return std::min<std::size_t>(h, 23);
}

double next_nhpp_interarrival(const RateProfile& profile, double t_now, RandomStream& stream)
{
    const double lambda_max = profile.max_per_second();
    if (!(lambda_max > 0.0)) throw ZeroRate("rate profile is zero everywhere");
    double t = t_now;
    for (;;) {
        t += -std::log(stream.uniform_open()) / lambda_max;
        if (stream.uniform() * lambda_max < profile.rate_at(t)) break;
    }
    // At very large t_now the increment can round to zero; the process still
    // advances by at least one ulp.
    const double dt = t - t_now;
    return dt > 0.0 ? dt : std::nextafter(t_now, INFINITY) - t_now;
}

double sample_exponential(double mean, RandomStream& stream)
{
    if (!(mean > 0.0) || !std::isfinite(mean)) throw InvalidMean("exponential mean must be finite and > 0");
    return -mean * std::log(stream.uniform_open());
}

bool bernoulli(double p, RandomStream& stream)
{
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("probability must lie in [0, 1]");
    return stream.uniform() < p;
}

double balanced_mean_lifetime(ClassId /*cls*/, double total_arrival_rate, double target_population)
{
    if (!(total_arrival_rate > 0.0) || !std::isfinite(total_arrival_rate))
        throw InvalidRate("aggregate arrival rate must be finite and > 0");
    if (!(target_population > 0.0)) throw InvalidRate("target population must be > 0");
    return target_population / total_arrival_rate;
}

} // namespace dsg
