#ifndef GIBBSDP_RNG_HPP
#define GIBBSDP_RNG_HPP

#include <cstdint>
#include <random>

namespace gibbsdp {

// Reproducible random stream: a (seed, stream_id) pair fully determines the
// draw sequence, and distinct stream ids give decorrelated streams, so
// parallel code can hand one stream to each task and stay deterministic
// under any scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    } while (u <= 0.0);
    return u;
  }

  double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  // Gamma(shape, 1).
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

  double beta(double a, double b) {
    const double x = gamma(a), y = gamma(b);
    return x / (x + y);
  }

 private:
  std::uint64_t seed_, stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace gibbsdp

#endif
