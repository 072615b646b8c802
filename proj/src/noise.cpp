#include "gftpl/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "gftpl/rng.hpp"

namespace gftpl {

namespace {

// Coordinate with density proportional to exp(-|x|^p): |x| = G^{1/p} with
// G ~ Gamma(1/p, 1), random sign.
double p_generalized(Rng& rng, double p) {
  double g = rng.gamma(1.0 / p);
  double mag = std::pow(g, 1.0 / p);
  return (rng.next_u64() & 1ull) ? mag : -mag;
}

}  // namespace

NoiseVector sample(const NoiseSpec& spec, std::uint64_t seed) {
  if (spec.dimension < 1)
    throw std::invalid_argument("noise: dimension must be >= 1");
  const int n = spec.dimension;
  Rng rng(seed);
  NoiseVector out;
  out.seed = seed;
  out.family = spec.family;
  out.alpha.resize(n);

  switch (spec.family) {
    case NoiseFamily::kLaplace:
      for (int i = 0; i < n; ++i) out.alpha[i] = rng.laplace();
      break;
    case NoiseFamily::kNegExponential:
      for (int i = 0; i < n; ++i) out.alpha[i] = -rng.exponential();
      break;
    case NoiseFamily::kLp: {
      if (spec.p < 1.0) throw std::invalid_argument("noise: lp needs p >= 1");
      // Radial decomposition of the density prop. to exp(-||alpha||_p):
      // direction uniform on the unit lp sphere (via normalized
      // p-generalized coordinates), radius R ~ Gamma(N, 1). At p = 1 this
      // reproduces N iid Laplace draws exactly in distribution.
      std::vector<double> dir(n);
      double norm_p = 0.0;
      for (int i = 0; i < n; ++i) {
        dir[i] = p_generalized(rng, spec.p);
        norm_p += std::pow(std::fabs(dir[i]), spec.p);
      }
      norm_p = std::pow(norm_p, 1.0 / spec.p);
      double r = rng.gamma(static_cast<double>(n));
      for (int i = 0; i < n; ++i) out.alpha[i] = r * dir[i] / norm_p;
      break;
    }
  }
  return out;
}

double max_row_product_bound(int k, int n) {
  if (k < 2) throw std::invalid_argument("max_row_product_bound: K must be >= 2");
  if (n < 1) throw std::invalid_argument("max_row_product_bound: N must be >= 1");
  double lnk = std::log(static_cast<double>(k));
  double inner = std::max(2.0 * lnk, std::sqrt(n * lnk));
  return std::sqrt(2.0) * inner;
}

McEstimate mc_expected_max(const std::vector<std::vector<double>>& gamma,
                           const NoiseSpec& spec, int trials,
                           std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("mc_expected_max: trials < 2");
  if (gamma.empty()) throw std::invalid_argument("mc_expected_max: empty matrix");
  const int n = spec.dimension;
  for (const auto& row : gamma)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("mc_expected_max: dimension mismatch");

  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    NoiseVector nv = sample(spec, derive_seed(seed, "mc_expected_max", t));
    double best = -1e300;
    for (const auto& row : gamma) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += row[i] * nv.alpha[i];
      if (dot > best) best = dot;
    }
    sum += best;
    sumsq += best * best;
  }
  McEstimate est;
  est.mean = sum / trials;
  double var = (sumsq - sum * sum / trials) / (trials - 1);
  if (var < 0.0) var = 0.0;
  est.stderr_ = std::sqrt(var / trials);
  return est;
}

}  // namespace gftpl
