#pragma once

#include <cstdint>
#include <vector>

namespace gftpl {

enum class NoiseFamily { kLaplace, kLp, kNegExponential };

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kLaplace;
  int dimension = 1;
  double p = 1.0;  // only for kLp; p >= 1
};

// One sampled base vector. Algorithms draw this once per run and only
// rescale it by 1/eta_t afterwards; resampling mid-run is a contract
// violation.
struct NoiseVector {
  std::vector<double> alpha;
  std::uint64_t seed = 0;
  NoiseFamily family = NoiseFamily::kLaplace;
};

NoiseVector sample(const NoiseSpec& spec, std::uint64_t seed);

// sqrt(2) * max{2 ln K, sqrt(N ln K)}: the bound on E[max_k <row_k, alpha>]
// for [0,1] matrices under unit Laplace noise. Rejects K < 2.
double max_row_product_bound(int k, int n);

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Monte-Carlo estimate of E[max_k <gamma_k, alpha>].
McEstimate mc_expected_max(const std::vector<std::vector<double>>& gamma,
                           const NoiseSpec& spec, int trials,
                           std::uint64_t seed);

}  // namespace gftpl
