#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "c0lab/types.hpp"

namespace c0lab {

/// Truncated Taylor expansion at a point: coefficient k is f^{(k)}(z)/k!.
using Jet = std::vector<Complex>;

/// Point of the open unit disk.
class DiskPoint {
 public:
  explicit DiskPoint(Complex value);
  DiskPoint(double re, double im = 0.0) : DiskPoint(Complex(re, im)) {}

  Complex value() const noexcept { return value_; }
  bool operator==(const DiskPoint& other) const noexcept { return value_ == other.value_; }

 private:
  Complex value_;
};

struct ZeroEntry {
  DiskPoint point;
  int multiplicity = 1;
};

/// Ordered distinct disk points with positive multiplicities. The order is
/// the factor order of every product built from the set; a point of
/// multiplicity m occupies m consecutive factors.
class ZeroSet {
 public:
  explicit ZeroSet(std::vector<ZeroEntry> entries);
  /// All multiplicities 1.
  static ZeroSet simple(const std::vector<Complex>& points);
  /// Zero-degree set; only used for the trivial divisor u = 1.
  static ZeroSet empty() { return ZeroSet(); }

  const std::vector<ZeroEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Complex point(std::size_t j) const { return entries_.at(j).point.value(); }
  int multiplicity(std::size_t j) const { return entries_.at(j).multiplicity; }
  int degree() const noexcept;
  int max_multiplicity() const noexcept;
  bool is_simple() const noexcept { return max_multiplicity() <= 1; }
  std::vector<Complex> points() const;
  /// Multiplicity-expanded factor list in product order.
  std::vector<Complex> expanded() const;
  /// Concatenation; rejects repeated points.
  ZeroSet concat(const ZeroSet& other) const;

 private:
  ZeroSet() = default;
  std::vector<ZeroEntry> entries_;
};

// ---------------------------------------------------------------------------
// Scalar primitives, templated on the real type.

/// b_lambda(z) = (conj(l)/|l|) (l - z) / (1 - conj(l) z), with b_0(z) = z.
template <typename Real>
std::complex<Real> blaschke_factor(std::complex<Real> lambda, std::complex<Real> z) {
  if (lambda == std::complex<Real>(0)) return z;
  const Real a = std::abs(lambda);
  return (std::conj(lambda) / a) * (lambda - z) / (Real(1) - std::conj(lambda) * z);
}

/// Pseudo-hyperbolic distance |b_x(y)|.
template <typename Real>
Real pseudo_distance(std::complex<Real> x, std::complex<Real> y) {
  return std::abs(blaschke_factor(x, y));
}

inline double pseudo_distance(const DiskPoint& x, const DiskPoint& y) {
  return pseudo_distance(x.value(), y.value());
}

/// Taylor coefficients of b_lambda at z up to the given order. b_lambda is the
/// Moebius map (a w + b)/(c w + d); for k >= 1 the k-th coefficient is
/// (ad - bc) (-c)^{k-1} / (c z + d)^{k+1}.
template <typename Real>
std::vector<std::complex<Real>> factor_jet(std::complex<Real> lambda, std::complex<Real> z, int order) {
  using C = std::complex<Real>;
  std::vector<C> out(order + 1, C(0));
  C a(1), b(0), c(0), d(1);
  if (lambda != C(0)) {
    const C u = std::conj(lambda) / std::abs(lambda);
    a = -u;
    b = u * lambda;
    c = -std::conj(lambda);
  }
  const C den = c * z + d;
  out[0] = (a * z + b) / den;
  const C det = a * d - b * c;
  C pw = C(1) / (den * den);
  for (int k = 1; k <= order; ++k) {
    out[k] = det * pw;
    pw *= -c / den;
  }
  return out;
}

/// Product of truncated Taylor series (same truncation order).
Jet jet_multiply(const Jet& a, const Jet& b);

// ---------------------------------------------------------------------------

/// theta(z) = unimodular * prod_j b_{lambda_j}(z)^{m_j}.
class BlaschkeProduct {
 public:
  explicit BlaschkeProduct(ZeroSet zeros, Complex unimodular = 1.0);
  /// The constant function 1 (empty product).
  static BlaschkeProduct unit() { return BlaschkeProduct(ZeroSet::empty()); }

  const ZeroSet& zeros() const noexcept { return zeros_; }
  Complex unimodular_constant() const noexcept { return unimodular_; }
  int degree() const noexcept { return zeros_.degree(); }

  Complex evaluate(Complex z) const;
  /// Product of the unimodular constant and the first m expanded factors.
  Complex partial_evaluate(int m, Complex z) const;
  /// Taylor coefficients at z up to `order` (no guard).
  Jet jet(Complex z, int order) const;
  /// Exact p-th derivative from the factor closed forms; p <= 12.
  Complex derivative(Complex z, int p) const;

  /// theta(T) from the factor formula (l - T)(1 - conj(l) T)^{-1}; valid
  /// whenever 1/conj(l) is not an eigenvalue of T.
  CMatrix evaluate(const CMatrix& t) const;

 private:
  ZeroSet zeros_;
  Complex unimodular_;
  std::vector<Complex> expanded_;
};

inline constexpr int max_derivative_order = 12;

Complex blaschke_factor(const DiskPoint& lambda, Complex z);

/// delta = min_k prod_{j != k} pseudo_distance(lambda_j, lambda_k); 1 for a single point.
double carleson_constant(const ZeroSet& zeros);

// ---------------------------------------------------------------------------
// Scenario sequences.

enum class SequenceKind { Exponential, ClusteredPairs, UniformHyperbolic };

struct SequenceSpec {
  SequenceKind kind = SequenceKind::Exponential;
  int count = 1;
  /// exponential: ratio r; clustered_pairs: gap; uniform_hyperbolic: max modulus.
  double param = 0.5;
  std::uint64_t seed = 0;
  /// Cycled over the generated points; empty means all ones.
  std::vector<int> multiplicity_pattern;
};

const char* to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& s);

/// Radius of the base points used by clustered_pairs.
inline constexpr double clustered_pair_radius = 0.8;

/// exponential(r): lambda_j = 1 - r^j, j = 1..count.
/// clustered_pairs(gap): base points at radius 0.8, golden-angle spaced, each
///   followed by base + gap.
/// uniform_hyperbolic(R): points uniform in hyperbolic area inside |z| <= R.
ZeroSet generate(const SequenceSpec& spec);

}  // namespace c0lab
