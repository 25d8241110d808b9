#include "c0lab/model_space.hpp"

#include <cmath>
#include <limits>

#include "c0lab/linalg.hpp"
#include "c0lab/random.hpp"

namespace c0lab {

ModelBasis::ModelBasis(BlaschkeProduct theta) : theta_(std::move(theta)), nodes_(theta_.zeros().expanded()) {
  if (nodes_.empty()) throw Error(ErrorKind::InvalidArgument, "model space of a unimodular constant is {0}");
}

CVector ModelBasis::evaluate(Complex z) const {
  CVector e(dim());
  Complex prefix = 1.0;
  for (int k = 0; k < dim(); ++k) {
    const Complex l = nodes_[k];
    e(k) = std::sqrt(1.0 - std::norm(l)) / (1.0 - std::conj(l) * z) * prefix;
    prefix *= blaschke_factor(l, z);
  }
  return e;
}

ModelBasis model_basis(const BlaschkeProduct& theta) { return ModelBasis(theta); }

CompressedShift jordan_block_matrix(const BlaschkeProduct& theta) {
  const auto l = theta.zeros().expanded();
  const int n = static_cast<int>(l.size());
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "jordan_block_matrix needs degree >= 1");
  // Phase of the factor normalization relative to (z - l)/(1 - conj(l) z).
  std::vector<Complex> phase(n, 1.0);
  for (int k = 0; k < n; ++k)
    if (l[k] != Complex(0)) phase[k] = -std::conj(l[k]) / std::abs(l[k]);
  CMatrix s = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    s(j, j) = l[j];
    const double wj = std::sqrt(1.0 - std::norm(l[j]));
    Complex chain = 1.0;      // prod_{j<k<i} (-conj l_k)
    Complex rotation = std::conj(phase[j]);  // conj prod_{j<=k<i} phase_k
    for (int i = j + 1; i < n; ++i) {
      s(i, j) = rotation * wj * std::sqrt(1.0 - std::norm(l[i])) * chain;
      chain *= -std::conj(l[i]);
      rotation *= std::conj(phase[i]);
    }
  }
  return {theta, s};
}

CMatrix jordan_model(const BlaschkeProduct& theta) {
  std::vector<CMatrix> blocks;
  for (const auto& e : theta.zeros().entries())
    blocks.push_back(jordan_block_matrix(BlaschkeProduct(ZeroSet({e}))).matrix);
  return linalg::block_diagonal(blocks);
}

FunctionSpec FunctionSpec::polynomial(std::vector<Complex> coeffs) {
  return FunctionSpec(Polynomial{newton_from_monomial(std::move(coeffs))});
}

FunctionSpec FunctionSpec::polynomial(NewtonPolynomial form) {
  if (form.coeffs.empty()) form = newton_from_monomial({});
  return FunctionSpec(Polynomial{std::move(form)});
}

FunctionSpec FunctionSpec::blaschke(BlaschkeProduct b) { return FunctionSpec(std::move(b)); }

FunctionSpec FunctionSpec::rational(std::vector<Complex> numerator, std::vector<Complex> denominator) {
  if (numerator.empty()) numerator.push_back(0.0);
  const double r = min_root_modulus(denominator);
  if (!(r > 1.0 + 1e-8))
    throw Error(ErrorKind::InvalidArgument, "rational denominator vanishes in the closed disk", r);
  return FunctionSpec(Rational{std::move(numerator), std::move(denominator)});
}

Complex FunctionSpec::value(Complex z) const {
  return std::visit(
      [&](const auto& r) -> Complex {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Polynomial>)
          return r.form.evaluate(z);
        else if constexpr (std::is_same_v<T, BlaschkeProduct>)
          return r.evaluate(z);
        else
          return polynomial_value(r.numerator, z) / polynomial_value(r.denominator, z);
      },
      rep_);
}

Jet FunctionSpec::jet(Complex z, int order) const {
  return std::visit(
      [&](const auto& r) -> Jet {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return r.form.jet(z, order);
        } else if constexpr (std::is_same_v<T, BlaschkeProduct>) {
          if (order > max_derivative_order)
            throw Error(ErrorKind::UnsupportedFunction, "Blaschke jets are limited to order 12", order);
          return r.jet(z, order);
        } else {
          return rational_jet(r.numerator, r.denominator, z, order);
        }
      },
      rep_);
}

double min_root_modulus(const std::vector<Complex>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == Complex(0)) --deg;
  if (deg < 0 || (deg == 0 && coeffs[0] == Complex(0))) return 0.0;
  if (deg == 0) return std::numeric_limits<double>::infinity();
  CMatrix companion = CMatrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

Jet rational_jet(const std::vector<Complex>& num, const std::vector<Complex>& den, Complex z, int order) {
  const Jet n = polynomial_jet(num, z, order);
  const Jet d = polynomial_jet(den, z, order);
  Jet q(order + 1, Complex(0));
  for (int k = 0; k <= order; ++k) {
    Complex acc = n[k];
    for (int i = 1; i <= k; ++i) acc -= d[i] * q[k - i];
    q[k] = acc / d[0];
  }
  return q;
}

namespace {

void check_annihilation(const CMatrix& t, const BlaschkeProduct& theta, double limit) {
  if (t.rows() != t.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  const double a = linalg::spectral_norm(theta.evaluate(t));
  if (!(a <= limit))
    throw Error(ErrorKind::AnnihilationFailed, "theta(T) is not negligible: ||theta(T)|| = " + std::to_string(a), a);
}

std::vector<Jet> jets_at_zeros(const BlaschkeProduct& theta, const FunctionSpec& u) {
  std::vector<Jet> jets;
  for (const auto& e : theta.zeros().entries()) jets.push_back(u.jet(e.point.value(), e.multiplicity - 1));
  return jets;
}

std::vector<int> multiplicities(const ZeroSet& z) {
  std::vector<int> m;
  for (const auto& e : z.entries()) m.push_back(e.multiplicity);
  return m;
}

}  // namespace

NewtonPolynomial hermite_polynomial(const BlaschkeProduct& theta, const FunctionSpec& u) {
  return hermite_interpolate(theta.zeros().points(), jets_at_zeros(theta, u), multiplicities(theta.zeros()));
}

CMatrix hermite_calculus(const CMatrix& t, const BlaschkeProduct& theta, const std::vector<Jet>& jets,
                         double annihilation_limit) {
  check_annihilation(t, theta, annihilation_limit);
  const auto p = hermite_interpolate(theta.zeros().points(), jets, multiplicities(theta.zeros()));
  return p.evaluate(t);
}

CMatrix hermite_calculus(const CMatrix& t, const BlaschkeProduct& theta, const FunctionSpec& u,
                         double annihilation_limit) {
  return hermite_calculus(t, theta, jets_at_zeros(theta, u), annihilation_limit);
}

std::size_t divisor_count(const ZeroSet& zeros) {
  std::size_t count = 1;
  for (const auto& e : zeros.entries()) {
    count *= std::size_t(e.multiplicity + 1);
    if (count > max_divisor_count) return count;
  }
  return count;
}

BlaschkeProduct divisor_from_exponents(const ZeroSet& zeros, const std::vector<int>& exponents) {
  std::vector<ZeroEntry> entries;
  for (std::size_t j = 0; j < zeros.size(); ++j)
    if (exponents.at(j) > 0) entries.push_back({zeros.entries()[j].point, exponents[j]});
  if (entries.empty()) return BlaschkeProduct::unit();
  return BlaschkeProduct(ZeroSet(std::move(entries)));
}

std::vector<InnerDivisor> inner_divisors(const BlaschkeProduct& theta) {
  const ZeroSet& z = theta.zeros();
  const std::size_t count = divisor_count(z);
  if (count > max_divisor_count)
    throw Error(ErrorKind::CombinatorialLimit, "inner divisor enumeration exceeds 2^16", double(count));
  std::vector<InnerDivisor> out;
  out.reserve(count);
  std::vector<int> k(z.size(), 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    out.push_back({k, divisor_from_exponents(z, k)});
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (++k[j] <= z.multiplicity(j)) break;
      k[j] = 0;
    }
  }
  return out;
}

double partial_isometry_defect(const CMatrix& a) {
  return linalg::spectral_norm(CMatrix(a * a.adjoint() * a - a));
}

CrownReport crown_equivalence_check(const DiskPoint& lambda, int m) {
  if (m < 1 || m > 12) throw Error(ErrorKind::InvalidArgument, "crown check needs 1 <= m <= 12", m);
  const Complex l = lambda.value();
  const BlaschkeProduct factor(ZeroSet({{lambda, 1}}));
  const BlaschkeProduct theta(ZeroSet({{lambda, m}}));
  CrownReport rep;
  rep.model = jordan_block_matrix(theta).matrix;
  rep.image = hermite_calculus(rep.model, theta, FunctionSpec::blaschke(factor));

  // cyclic vector of the nilpotent image, phase-fixed, then its Krylov basis
  CMatrix top = CMatrix::Identity(m, m);
  for (int k = 1; k < m; ++k) top = rep.image * top;
  Eigen::JacobiSVD<CMatrix> svd(top, Eigen::ComputeFullV);
  CVector xi = svd.matrixV().col(0);
  Eigen::Index big = 0;
  xi.cwiseAbs().maxCoeff(&big);
  xi *= std::conj(xi(big)) / std::abs(xi(big));
  CMatrix k(m, m);
  k.col(0) = xi;
  for (int c = 1; c < m; ++c) k.col(c) = rep.image * k.col(c - 1);

  const double unitary_defect = linalg::spectral_norm(CMatrix(k.adjoint() * k - CMatrix::Identity(m, m)));
  rep.alignment = unitary_defect <= 1e-14 * m ? k : linalg::polar_unitary(k);
  rep.distance = linalg::spectral_norm(
      CMatrix(rep.alignment.adjoint() * rep.image * rep.alignment - linalg::shift_matrix(m)));

  // b_l = (conj(l)/|l|) phi with phi(z) = (l - z)/(1 - conj(l) z), an involution
  const auto phi = [l](Complex z) { return (l - z) / (1.0 - std::conj(l) * z); };
  double inv = 0;
  for (int a = 0; a < 10; ++a)
    for (int r = 0; r < 10; ++r) {
      const Complex z = std::polar(0.095 * (r + 0.5), 2 * M_PI * a / 10.0);
      inv = std::max(inv, std::abs(phi(phi(z)) - z));
    }
  rep.involution_residual = inv;
  return rep;
}

int cyclic_rank(const CMatrix& t) {
  Rng rng(0x5eedc0ffeeULL);
  CVector v(t.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return linalg::krylov_rank(t, v);
}

}  // namespace c0lab
