#pragma once

#include <vector>

#include "c0lab/blaschke.hpp"
#include "c0lab/linalg.hpp"
#include "c0lab/random.hpp"

namespace c0lab::testing {

inline double norm(const CMatrix& a) { return linalg::spectral_norm(a); }
inline CMatrix eye(Eigen::Index n) { return CMatrix::Identity(n, n); }

inline std::vector<Complex> random_points(Rng& rng, int n, double radius) {
  std::vector<Complex> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rng.disk_point(radius));
  return pts;
}

inline ZeroSet random_zeros(Rng& rng, int n, double radius = 0.9) {
  return ZeroSet::simple(random_points(rng, n, radius));
}

/// Simple zeros with carleson_constant >= min_delta, by rejection.
inline ZeroSet spread_zeros(Rng& rng, int n, double radius, double min_delta) {
  for (;;) {
    ZeroSet z = random_zeros(rng, n, radius);
    if (carleson_constant(z) >= min_delta) return z;
  }
}

inline ZeroSet with_multiplicities(const ZeroSet& z, const std::vector<int>& m) {
  std::vector<ZeroEntry> e;
  for (std::size_t j = 0; j < z.size(); ++j) e.push_back({DiskPoint(z.point(j)), m[j % m.size()]});
  return ZeroSet(std::move(e));
}

}  // namespace c0lab::testing
