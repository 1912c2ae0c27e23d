#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>

#include "dsg/classes.hpp"

namespace dsg {

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;

/// SplitMix64 finalizer. Used to derive stream seeds; not a generator itself.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Identity of a stream within a replication: a domain tag plus two keys,
/// e.g. (process, poi, object class) or (task, poi, 0).
struct StreamId {
    std::uint32_t domain = 0;
    std::uint64_t key_a = 0;
    std::uint64_t key_b = 0;
};

namespace stream_domain {
inline constexpr std::uint32_t process = 1;
inline constexpr std::uint32_t task = 2;
inline constexpr std::uint32_t synthetic = 3;
inline constexpr std::uint32_t test = 99;
} // namespace stream_domain

/// Deterministic random stream: a 64-bit Mersenne Twister seeded from the
/// SplitMix64 hash of (replication seed, stream id). Uniforms are built from
/// the top 53 bits directly so sequences do not depend on the standard
/// library's distribution implementations.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamId id);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    StreamId id() const noexcept { return id_; }

private:
    StreamId id_;
    std::mt19937_64 engine_;
};

/// Piecewise-constant arrival rate with daily period; 24 hourly bins in
/// arrivals per hour.
class RateProfile {
public:
    RateProfile() = default;
    explicit RateProfile(std::span<const double> hourly_rates); // throws InvalidRate
    static RateProfile constant(double per_hour);

    /// Rate in arrivals per second at absolute simulation time t.
    double rate_at(double t) const noexcept { return per_second_[hour_of_day(t)]; }
    double per_hour(std::size_t hour) const { return hourly_.at(hour); }
    double max_per_second() const noexcept { return max_per_second_; }
    double mean_per_second() const noexcept;
    bool inert() const noexcept { return max_per_second_ <= 0.0; }
    const std::array<double, 24>& hourly() const noexcept { return hourly_; }

    static std::size_t hour_of_day(double t) noexcept;

private:
    std::array<double, 24> hourly_{};
    std::array<double, 24> per_second_{};
    double max_per_second_ = 0.0;
};

/// Time to the next arrival of the non-homogeneous Poisson process with rate
/// `profile`, by thinning a homogeneous proposal stream at the peak rate.
/// Throws ZeroRate for an all-zero profile.
double next_nhpp_interarrival(const RateProfile& profile, double t_now, RandomStream& stream);

/// Exponential draw with the given mean; strictly positive. Throws InvalidMean.
double sample_exponential(double mean, RandomStream& stream);

/// Throws InvalidProbability outside [0, 1].
bool bernoulli(double p, RandomStream& stream);

/// Mean lifetime W = L / lambda that keeps the expected steady-state
/// population of an object class at `target_population` (Little's law).
double balanced_mean_lifetime(ClassId cls, double total_arrival_rate, double target_population);

} // namespace dsg
