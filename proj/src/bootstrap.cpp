#include <cmath>
#include <numeric>
#include <random>

#include "coedit/error.hpp"
#include "coedit/metrics.hpp"
#include "rng.hpp"

namespace coedit {

namespace {

// n^n <= cap without overflow.
bool enumerable(std::size_t n, std::size_t cap) {
  double total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= static_cast<double>(n);
    if (total > static_cast<double>(cap)) return false;
  }
  return true;
}

}  // namespace

BootstrapResult bootstrap_test(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t resamples, double level, std::uint64_t seed) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "score vectors differ in length");
  if (a.size() < 2) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 2 examples");
  if (resamples == 0) throw Error(ErrorCode::InvalidArgument, "resamples must be positive");

  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];

  BootstrapResult result;
  result.seed = seed;
  result.observed_diff = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  const int sign = result.observed_diff > 0 ? 1 : result.observed_diff < 0 ? -1 : 0;

  std::size_t consistent = 0;
  const auto tally = [&](double sum) {
    if ((sign > 0 && sum > 0) || (sign < 0 && sum < 0)) ++consistent;
  };

  if (enumerable(n, resamples)) {
    result.exhaustive = true;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      double sum = 0;
      for (const auto i : idx) sum += d[i];
      tally(sum);
      ++result.draws;
      std::size_t k = 0;
      while (k < n && ++idx[k] == n) idx[k++] = 0;
      if (k == n) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t r = 0; r < resamples; ++r) {
      double sum = 0;
      for (std::size_t k = 0; k < n; ++k) sum += d[detail::draw_index(rng, n)];
      tally(sum);
    }
    result.draws = resamples;
  }

  result.consistent_fraction = static_cast<double>(consistent) / static_cast<double>(result.draws);
  result.p_estimate = 1.0 - result.consistent_fraction;
  result.significant = sign != 0 && result.consistent_fraction >= level;
  return result;
}

}  // namespace coedit
