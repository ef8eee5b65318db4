#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace pqmp {

/// Purpose tags for deriving independent substreams from one run seed.
enum class RngDomain : std::uint64_t {
    Dynamics = 1,     // saturation draws, routing, demand at one intersection
    Measurement = 2,  // controller-side queue measurement noise
    Scenario = 3,     // scenario-level draws outside any intersection
};

/// Deterministic random stream. Substreams are derived by hashing
/// (seed, domain, entity), so per-intersection streams stay reproducible
/// no matter how runs are scheduled.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derive(std::uint64_t run_seed, RngDomain domain, std::uint64_t entity);

    std::int64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<std::int64_t>(mean)(engine_);
    }

    double normal(double mean, double stddev) {
        if (stddev <= 0.0) return mean;
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Index in [0, n) drawn uniformly.
    std::size_t uniform_index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    /// Index drawn from a probability vector (must sum to ~1).
    int categorical(std::span<const double> probs) {
        double u = uniform01();
        for (int i = 0; i + 1 < static_cast<int>(probs.size()); ++i) {
            u -= probs[i];
            if (u < 0.0) return i;
        }
        return static_cast<int>(probs.size()) - 1;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pqmp
