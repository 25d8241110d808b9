#include "c0lab/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "c0lab/random.hpp"

namespace c0lab {

PickProblem::PickProblem(std::vector<DiskPoint> n, std::vector<Complex> t) : nodes(std::move(n)), targets(std::move(t)) {
  if (nodes.size() != targets.size())
    throw Error(ErrorKind::InvalidArgument, "pick problem: nodes and targets differ in length");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (nodes[i].value() == nodes[j].value())
        throw Error(ErrorKind::InvalidArgument, "pick problem: nodes must be distinct");
}

Complex Interpolant::evaluate(Complex z) const {
  if (newton) return newton->evaluate(z);
  return polynomial_value(numerator, z) / polynomial_value(denominator, z);
}

FunctionSpec Interpolant::function() const {
  if (newton) return FunctionSpec::polynomial(*newton);
  return FunctionSpec::rational(numerator, denominator);
}

namespace {

CMatrix szego_gram(const PickProblem& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = 1.0 / (1.0 - p.nodes[i].value() * std::conj(p.nodes[j].value()));
  return g;
}

bool psd(const CMatrix& p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p, Eigen::EigenvaluesOnly);
  const double floor = -1e-12 * (p.trace().real() / double(p.rows()));
  return es.eigenvalues()(0) >= std::min(floor, 0.0);
}

// sqrt(lambda_max(G^{-1} D G D*)): the exact threshold, used to seed the bracket.
double generalized_threshold(const PickProblem& p) {
  const CMatrix g = szego_gram(p);
  CVector w(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) w(i) = p.targets[i];
  const CMatrix dgd = w.asDiagonal() * g * w.conjugate().asDiagonal();
  Eigen::LLT<CMatrix> llt(g);
  if (llt.info() != Eigen::Success) return w.cwiseAbs().maxCoeff();
  CMatrix m = llt.matrixL().solve(dgd);
  m = llt.matrixL().solve(CMatrix(m.adjoint())).adjoint();
  m = (m + m.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

void finish_certificate(Interpolant& f, const std::vector<Complex>& nodes) {
  f.nodes = nodes;
  f.achieved_values.clear();
  for (const Complex z : nodes) f.achieved_values.push_back(f.evaluate(z));
  f.certified_norm = boundary_sup_norm([&](Complex z) { return f.evaluate(z); }, f.grid_size);
}

Interpolant constant_interpolant(Complex w, const std::vector<Complex>& nodes) {
  Interpolant f;
  f.numerator = {w};
  f.denominator = {1.0};
  f.pick_value = std::abs(w);
  finish_certificate(f, nodes);
  return f;
}

std::vector<Complex> node_values(const std::vector<DiskPoint>& pts) {
  std::vector<Complex> out;
  for (const auto& p : pts) out.push_back(p.value());
  return out;
}

// sum_j a_j prod_{i != j} (1 - conj(l_i) z), ascending coefficients.
std::vector<Complex> kernel_numerator(const std::vector<Complex>& l, const CVector& a) {
  const std::size_t n = l.size();
  std::vector<Complex> out(n, Complex(0));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> prod{a(j)};
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      std::vector<Complex> next(prod.size() + 1, Complex(0));
      for (std::size_t k = 0; k < prod.size(); ++k) {
        next[k] += prod[k];
        next[k + 1] -= std::conj(l[i]) * prod[k];
      }
      prod = std::move(next);
    }
    for (std::size_t k = 0; k < prod.size(); ++k) out[k] += prod[k];
  }
  return out;
}

}  // namespace

CMatrix pick_matrix(const PickProblem& problem, double c) {
  if (!(c > 0)) throw Error(ErrorKind::InvalidArgument, "pick_matrix needs c > 0", c);
  const auto n = static_cast<Eigen::Index>(problem.size());
  CMatrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      p(i, j) = (c * c - problem.targets[i] * std::conj(problem.targets[j])) /
                (1.0 - problem.nodes[i].value() * std::conj(problem.nodes[j].value()));
  return p;
}

bool pick_is_psd(const PickProblem& problem, double c) { return psd(pick_matrix(problem, c)); }

double minimal_norm(const PickProblem& problem) {
  if (problem.size() == 0) throw Error(ErrorKind::InvalidArgument, "minimal_norm needs at least one node");
  double wmax = 0;
  for (const Complex w : problem.targets) wmax = std::max(wmax, std::abs(w));
  if (wmax == 0) return 0.0;
  if (pick_is_psd(problem, wmax)) return wmax;

  const double seed = std::max(generalized_threshold(problem), wmax);
  double lo = std::max(wmax, seed * (1 - 1e-8));
  double hi = seed * (1 + 1e-8);
  while (pick_is_psd(problem, lo) && lo > wmax) {
    hi = lo;
    lo = std::max(wmax, lo * 0.5);
  }
  while (!pick_is_psd(problem, hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (pick_is_psd(problem, mid) ? hi : lo) = mid;
  }
  return hi;
}

Interpolant degenerate_interpolant(const PickProblem& problem) {
  const auto nodes = node_values(problem.nodes);
  const double cstar = minimal_norm(problem);
  if (cstar == 0) return constant_interpolant(0.0, nodes);
  bool all_equal = true;
  for (const Complex w : problem.targets) all_equal = all_equal && std::abs(w - problem.targets[0]) <= 1e-15 * cstar;
  if (all_equal) return constant_interpolant(problem.targets[0], nodes);

  // Newton steps on mu_min(c) = 0 sharpen the kernel beyond the bisection width.
  const CMatrix g = szego_gram(problem);
  double c = cstar;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pick_matrix(problem, c));
  for (int it = 0; it < 4; ++it) {
    const CVector v = es.eigenvectors().col(0);
    const double slope = 2 * c * (v.adjoint() * g * v)(0).real();
    if (!(slope > 0)) break;
    const double next = c - es.eigenvalues()(0) / slope;
    if (!(std::abs(next - c) <= 1e-6 * c)) break;
    Eigen::SelfAdjointEigenSolver<CMatrix> trial(pick_matrix(problem, next));
    if (std::abs(trial.eigenvalues()(0)) >= std::abs(es.eigenvalues()(0))) break;
    c = next;
    es = std::move(trial);
  }
  const auto& mu = es.eigenvalues();
  if (mu.size() > 1 && std::abs(mu(1) - mu(0)) <= 1e-12 * std::max(1.0, mu.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::DegenerateKernel,
                "Pick kernel is numerically more than one-dimensional; perturb the nodes or targets",
                std::abs(mu(1) - mu(0)));

  const CVector v = es.eigenvectors().col(0);
  CVector weighted(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) weighted(j) = std::conj(problem.targets[j]) * v(j);
  Interpolant f;
  f.numerator = kernel_numerator(nodes, c * c * v);
  f.denominator = kernel_numerator(nodes, weighted);
  f.pick_value = cstar;
  const double r = min_root_modulus(f.denominator);
  if (!(r > 1.0 + 1e-8))
    throw Error(ErrorKind::DegenerateKernel, "extremal denominator vanishes in the closed disk", r);
  finish_certificate(f, nodes);
  return f;
}

Interpolant indicator_interpolant(const ZeroSet& zeros, const std::vector<int>& subset) {
  std::vector<Complex> values(zeros.size(), Complex(0));
  for (const int a : subset) {
    if (a < 0 || a >= static_cast<int>(zeros.size()))
      throw Error(ErrorKind::InvalidArgument, "indicator index out of range", a);
    values[a] = 1.0;
  }
  if (!zeros.is_simple()) return flattening_interpolant(zeros, values, zeros.max_multiplicity());
  std::vector<DiskPoint> pts;
  for (const auto& e : zeros.entries()) pts.push_back(e.point);
  return degenerate_interpolant(PickProblem(std::move(pts), std::move(values)));
}

std::vector<Jet> flattening_jets(const std::vector<Complex>& values, int m) {
  std::vector<Jet> jets;
  for (const Complex w : values) {
    Jet j(m + 1, Complex(0));
    j[0] = w;
    jets.push_back(std::move(j));
  }
  return jets;
}

Interpolant flattening_interpolant(const ZeroSet& zeros, const std::vector<Complex>& values, int m) {
  if (values.size() != zeros.size())
    throw Error(ErrorKind::InvalidArgument, "flattening: one value per zero required");
  if (m < zeros.max_multiplicity())
    throw Error(ErrorKind::InvalidArgument, "flattening order below the largest multiplicity", m);
  const double conditions = double(zeros.size()) * (m + 1);
  if (conditions > max_flattening_conditions)
    throw Error(ErrorKind::CombinatorialLimit, "flattening interpolant exceeds 64 Hermite conditions", conditions);
  Interpolant f;
  f.newton = hermite_interpolate(zeros.points(), flattening_jets(values, m),
                                 std::vector<int>(zeros.size(), m + 1));
  f.numerator = f.newton->monomial();
  f.denominator = {1.0};
  finish_certificate(f, zeros.points());
  return f;
}

InterpolationConstant empirical_interpolation_constant(const ZeroSet& zeros, int exhaustive_limit, int samples,
                                                       std::uint64_t seed) {
  const int n = static_cast<int>(zeros.size());
  InterpolationConstant out;
  auto test = [&](std::uint64_t mask) {
    std::vector<int> subset;
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1) subset.push_back(j);
    double norm = 0;
    try {
      norm = indicator_interpolant(zeros, subset).certified_norm;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateKernel) throw;
      std::vector<Complex> values(n, Complex(0));
      for (const int a : subset) values[a] = 1.0;
      norm = minimal_norm(PickProblem(
          [&] {
            std::vector<DiskPoint> pts;
            for (const auto& en : zeros.entries()) pts.push_back(en.point);
            return pts;
          }(),
          values));
      ++out.degenerate;
    }
    ++out.subsets_tested;
    if (norm > out.value || out.argmax.empty()) {
      out.value = norm;
      out.argmax = subset;
    }
  };
  if (n <= exhaustive_limit) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) test(mask);
  } else {
    out.sampled = true;
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
      std::uint64_t mask = 0;
      for (int j = 0; j < n; ++j)
        if (rng.uniform() < 0.5) mask |= std::uint64_t(1) << j;
      test(mask);
    }
  }
  return out;
}

}  // namespace c0lab
