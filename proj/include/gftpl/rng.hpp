#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace gftpl {

// Deterministic, platform-independent random stream. std::mt19937_64 has a
// standardized bit stream, and all variate transforms below are written out
// explicitly (no std::*_distribution, whose algorithms are
// implementation-defined), so traces are bit-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on (0, 1] (safe as a log argument).
  double uniform_pos();

  double exponential();        // Exp(1)
  double laplace();            // density (1/2) exp(-|x|)
  double gamma(double shape);  // Gamma(shape, 1), shape > 0
  double normal();             // standard normal (Box-Muller)

 private:
  std::mt19937_64 engine_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Stable sub-seed derivation: independent streams for noise, environment
// and probes are derived from one root seed and a purpose label.
std::uint64_t derive_seed(std::uint64_t root, const std::string& purpose,
                          std::uint64_t index = 0);

}  // namespace gftpl
