#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "c0lab/types.hpp"

namespace c0lab {

/// Seeded generator with platform-independent distributions: only the raw
/// mt19937_64 stream is used, the transforms are spelled out here so that a
/// seed reproduces the same numbers on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) { return lo + int(engine_() % std::uint64_t(hi - lo + 1)); }
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }
  /// Uniform point in the disk of the given radius.
  Complex disk_point(double radius);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

CMatrix random_gaussian(Rng& rng, int rows, int cols);
/// Haar-distributed unitary (QR of a complex Gaussian matrix with phase fix).
CMatrix random_unitary(Rng& rng, int n);

/// Random V with cond_2(V) == condition, singular values log-spaced on
/// [1, condition]. Scaled: V = diag(s) U with the entries of s shuffled.
/// Rotated: V = U1 diag(s) U2. Rounding in V A V^-1 stays componentwise
/// relative for the scaled kind, while the rotated kind amplifies it by
/// roughly cond(V)^2.
enum class ConjugatorKind { Scaled, Rotated };
const char* to_string(ConjugatorKind kind);
ConjugatorKind conjugator_kind_from_string(const std::string& s);

struct Conjugator {
  CMatrix v;
  CMatrix v_inv;
};
Conjugator random_conjugator(Rng& rng, int n, double condition, ConjugatorKind kind = ConjugatorKind::Scaled);

}  // namespace c0lab
