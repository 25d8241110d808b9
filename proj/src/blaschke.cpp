#include "c0lab/blaschke.hpp"

#include <algorithm>
#include <cmath>

#include "c0lab/random.hpp"

namespace c0lab {

DiskPoint::DiskPoint(Complex value) : value_(value) {
  if (!(std::abs(value) < 1.0))
    throw Error(ErrorKind::InvalidArgument, "disk point must satisfy |z| < 1", std::abs(value));
}

ZeroSet::ZeroSet(std::vector<ZeroEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::InvalidArgument, "zero set must have degree >= 1");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].multiplicity < 1)
      throw Error(ErrorKind::InvalidArgument, "multiplicities must be positive", entries_[i].multiplicity);
    for (std::size_t j = 0; j < i; ++j)
      if (entries_[i].point == entries_[j].point)
        throw Error(ErrorKind::InvalidArgument, "zero set points must be pairwise distinct");
  }
}

ZeroSet ZeroSet::simple(const std::vector<Complex>& points) {
  std::vector<ZeroEntry> e;
  e.reserve(points.size());
  for (auto p : points) e.push_back({DiskPoint(p), 1});
  return ZeroSet(std::move(e));
}

int ZeroSet::degree() const noexcept {
  int d = 0;
  for (const auto& e : entries_) d += e.multiplicity;
  return d;
}

int ZeroSet::max_multiplicity() const noexcept {
  int m = 0;
  for (const auto& e : entries_) m = std::max(m, e.multiplicity);
  return m;
}

std::vector<Complex> ZeroSet::points() const {
  std::vector<Complex> out;
  for (const auto& e : entries_) out.push_back(e.point.value());
  return out;
}

std::vector<Complex> ZeroSet::expanded() const {
  std::vector<Complex> out;
  for (const auto& e : entries_)
    for (int k = 0; k < e.multiplicity; ++k) out.push_back(e.point.value());
  return out;
}

ZeroSet ZeroSet::concat(const ZeroSet& other) const {
  std::vector<ZeroEntry> e = entries_;
  e.insert(e.end(), other.entries_.begin(), other.entries_.end());
  if (e.empty()) return ZeroSet();
  return ZeroSet(std::move(e));
}

Jet jet_multiply(const Jet& a, const Jet& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Jet out(n, Complex(0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) out[k] += a[i] * b[k - i];
  return out;
}

BlaschkeProduct::BlaschkeProduct(ZeroSet zeros, Complex unimodular)
    : zeros_(std::move(zeros)), unimodular_(unimodular), expanded_(zeros_.expanded()) {
  if (std::abs(std::abs(unimodular) - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "unimodular constant must have modulus 1", std::abs(unimodular));
}

Complex BlaschkeProduct::evaluate(Complex z) const {
  return partial_evaluate(static_cast<int>(expanded_.size()), z);
}

Complex BlaschkeProduct::partial_evaluate(int m, Complex z) const {
  if (m < 0 || m > static_cast<int>(expanded_.size()))
    throw Error(ErrorKind::InvalidArgument, "partial product index out of range", m);
  Complex p = unimodular_;
  for (int k = 0; k < m; ++k) p *= blaschke_factor(expanded_[k], z);
  return p;
}

Jet BlaschkeProduct::jet(Complex z, int order) const {
  Jet out(order + 1, Complex(0));
  out[0] = unimodular_;
  for (const auto& e : zeros_.entries()) {
    const Jet f = factor_jet(e.point.value(), z, order);
    for (int k = 0; k < e.multiplicity; ++k) out = jet_multiply(out, f);
  }
  return out;
}

Complex BlaschkeProduct::derivative(Complex z, int p) const {
  if (p < 0 || p > max_derivative_order)
    throw Error(ErrorKind::UnsupportedOrder, "derivative order outside [0, 12]", p);
  double fact = 1;
  for (int k = 2; k <= p; ++k) fact *= k;
  return jet(z, p)[p] * fact;
}

CMatrix BlaschkeProduct::evaluate(const CMatrix& t) const {
  const Eigen::Index n = t.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix out = unimodular_ * id;
  for (const auto& e : zeros_.entries()) {
    const Complex l = e.point.value();
    CMatrix f;
    if (l == Complex(0)) {
      f = t;
    } else {
      const Complex u = std::conj(l) / std::abs(l);
      const CMatrix den = id - std::conj(l) * t;
      // den^{-1} commutes with (l - T); solve from the right.
      f = u * den.partialPivLu().solve(CMatrix(l * id - t));
    }
    for (int k = 0; k < e.multiplicity; ++k) out = out * f;
  }
  return out;
}

Complex blaschke_factor(const DiskPoint& lambda, Complex z) { return blaschke_factor(lambda.value(), z); }

double carleson_constant(const ZeroSet& zeros) {
  if (!zeros.is_simple())
    throw Error(ErrorKind::InvalidArgument, "carleson_constant needs simple zeros", zeros.max_multiplicity());
  const auto pts = zeros.points();
  double delta = 1.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double prod = 1.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != k) prod *= pseudo_distance(pts[j], pts[k]);
    delta = std::min(delta, prod);
  }
  return delta;
}

const char* to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Exponential: return "exponential";
    case SequenceKind::ClusteredPairs: return "clustered_pairs";
    case SequenceKind::UniformHyperbolic: return "uniform_hyperbolic";
  }
  return "?";
}

SequenceKind sequence_kind_from_string(const std::string& s) {
  if (s == "exponential") return SequenceKind::Exponential;
  if (s == "clustered_pairs") return SequenceKind::ClusteredPairs;
  if (s == "uniform_hyperbolic") return SequenceKind::UniformHyperbolic;
  throw Error(ErrorKind::InvalidArgument, "unknown sequence kind '" + s + "'");
}

ZeroSet generate(const SequenceSpec& spec) {
  if (spec.count < 1) throw Error(ErrorKind::InvalidArgument, "count must be >= 1", spec.count);
  std::vector<Complex> pts;
  switch (spec.kind) {
    case SequenceKind::Exponential: {
      if (!(spec.param > 0 && spec.param < 1))
        throw Error(ErrorKind::InvalidArgument, "exponential ratio must lie in (0,1)", spec.param);
      for (int j = 1; j <= spec.count; ++j) pts.emplace_back(1.0 - std::pow(spec.param, j), 0.0);
      break;
    }
    case SequenceKind::ClusteredPairs: {
      if (!(spec.param > 0))
        throw Error(ErrorKind::InvalidArgument, "clustered_pairs gap must be positive", spec.param);
      const double golden = M_PI * (3.0 - std::sqrt(5.0));
      for (int i = 0; static_cast<int>(pts.size()) < spec.count; ++i) {
        const Complex base = std::polar(clustered_pair_radius, golden * i);
        pts.push_back(base);
        if (static_cast<int>(pts.size()) < spec.count) pts.push_back(base + spec.param);
      }
      break;
    }
    case SequenceKind::UniformHyperbolic: {
      const double r_max = spec.param;
      if (!(r_max > 0 && r_max < 1))
        throw Error(ErrorKind::InvalidArgument, "uniform_hyperbolic radius must lie in (0,1)", r_max);
      Rng rng(spec.seed);
      // hyperbolic area inside pseudo-radius r is proportional to r^2 / (1 - r^2)
      const double a_max = r_max * r_max / (1 - r_max * r_max);
      while (static_cast<int>(pts.size()) < spec.count) {
        const double a = rng.uniform() * a_max;
        const Complex z = std::polar(std::sqrt(a / (1 + a)), 2 * M_PI * rng.uniform());
        if (std::find(pts.begin(), pts.end(), z) == pts.end()) pts.push_back(z);
      }
      break;
    }
  }
  std::vector<ZeroEntry> entries;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const int m = spec.multiplicity_pattern.empty()
                      ? 1
                      : spec.multiplicity_pattern[j % spec.multiplicity_pattern.size()];
    entries.push_back({DiskPoint(pts[j]), m});
  }
  return ZeroSet(std::move(entries));
}

}  // namespace c0lab
