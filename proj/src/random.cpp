#include "c0lab/random.hpp"

#include <cmath>

namespace c0lab {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2 * M_PI * u2);
  has_spare_ = true;
  return r * std::cos(2 * M_PI * u2);
}

Complex Rng::disk_point(double radius) {
  const double r = radius * std::sqrt(uniform());
  const double t = 2 * M_PI * uniform();
  return std::polar(r, t);
}

CMatrix random_gaussian(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

CMatrix random_unitary(Rng& rng, int n) {
  const CMatrix g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

const char* to_string(ConjugatorKind kind) { return kind == ConjugatorKind::Scaled ? "scaled" : "rotated"; }

ConjugatorKind conjugator_kind_from_string(const std::string& s) {
  if (s == "scaled") return ConjugatorKind::Scaled;
  if (s == "rotated") return ConjugatorKind::Rotated;
  throw Error(ErrorKind::InvalidArgument, "unknown conjugator kind '" + s + "'");
}

Conjugator random_conjugator(Rng& rng, int n, double condition, ConjugatorKind kind) {
  if (n < 1 || !(condition >= 1)) throw Error(ErrorKind::InvalidArgument, "conjugator needs n >= 1, condition >= 1");
  RVector s(n);
  for (int k = 0; k < n; ++k)
    s(k) = n == 1 ? 1.0 : std::pow(condition, double(k) / double(n - 1));
  Conjugator c;
  if (kind == ConjugatorKind::Scaled) {
    for (int k = n - 1; k > 0; --k) std::swap(s(k), s(rng.uniform_int(0, k)));
    const CMatrix u = random_unitary(rng, n);
    c.v = s.cast<Complex>().asDiagonal() * u;
    c.v_inv = u.adjoint() * s.cwiseInverse().cast<Complex>().asDiagonal();
  } else {
    const CMatrix u1 = random_unitary(rng, n);
    const CMatrix u2 = random_unitary(rng, n);
    c.v = u1 * s.cast<Complex>().asDiagonal() * u2;
    c.v_inv = u2.adjoint() * s.cwiseInverse().cast<Complex>().asDiagonal() * u1.adjoint();
  }
  return c;
}

}  // namespace c0lab
