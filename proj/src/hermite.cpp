#include "c0lab/hermite.hpp"

namespace c0lab {

Complex NewtonPolynomial::evaluate(Complex z) const {
  if (coeffs.empty()) return 0.0;
  Complex r = coeffs.back();
  for (int k = size() - 2; k >= 0; --k) r = coeffs[k] + (z - nodes[k]) * r;
  return r;
}

Jet NewtonPolynomial::jet(Complex z, int order) const {
  Jet r(order + 1, Complex(0));
  if (coeffs.empty()) return r;
  r[0] = coeffs.back();
  for (int k = size() - 2; k >= 0; --k) {
    // r <- c_k + (z - x_k + h) r
    const Complex shift = z - nodes[k];
    for (int i = order; i >= 0; --i) r[i] = shift * r[i] + (i > 0 ? r[i - 1] : Complex(0));
    r[0] += coeffs[k];
  }
  return r;
}

NewtonPolynomial newton_from_monomial(std::vector<Complex> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  NewtonPolynomial p;
  p.nodes.assign(coeffs.size(), Complex(0));
  p.coeffs = std::move(coeffs);
  return p;
}

CMatrix NewtonPolynomial::evaluate(const CMatrix& t) const {
  const Eigen::Index n = t.rows();
  if (coeffs.empty()) return CMatrix::Zero(n, n);
  CMatrix r = coeffs.back() * CMatrix::Identity(n, n);
  for (int k = size() - 2; k >= 0; --k) {
    CMatrix shifted = t;
    shifted.diagonal().array() -= nodes[k];
    r = shifted * r;
    r.diagonal().array() += coeffs[k];
  }
  return r;
}

std::vector<Complex> NewtonPolynomial::monomial() const {
  if (coeffs.empty()) return {};
  std::vector<Complex> r{coeffs.back()};
  for (int k = size() - 2; k >= 0; --k) {
    // r <- c_k + (z - x_k) r
    std::vector<Complex> next(r.size() + 1, Complex(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
      next[i + 1] += r[i];
      next[i] -= nodes[k] * r[i];
    }
    next[0] += coeffs[k];
    r = std::move(next);
  }
  return r;
}

NewtonPolynomial hermite_interpolate(const std::vector<Complex>& points, const std::vector<Jet>& jets,
                                     const std::vector<int>& counts) {
  if (points.size() != jets.size() || points.size() != counts.size())
    throw Error(ErrorKind::InvalidArgument, "hermite_interpolate: mismatched argument lengths");
  std::vector<Complex> x;
  std::vector<int> owner;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (static_cast<int>(jets[j].size()) < counts[j])
      throw Error(ErrorKind::UnsupportedFunction, "jet shorter than required derivative order", counts[j]);
    for (int k = 0; k < counts[j]; ++k) {
      x.push_back(points[j]);
      owner.push_back(static_cast<int>(j));
    }
  }
  const int n = static_cast<int>(x.size());
  std::vector<Complex> d(n);
  for (int i = 0; i < n; ++i) d[i] = jets[owner[i]][0];
  NewtonPolynomial p;
  p.nodes = x;
  p.coeffs.resize(n);
  if (n > 0) p.coeffs[0] = d[0];
  for (int k = 1; k < n; ++k) {
    for (int i = n - 1; i >= k; --i) {
      if (owner[i] == owner[i - k])
        d[i] = jets[owner[i]][k];
      else
        d[i] = (d[i] - d[i - 1]) / (x[i] - x[i - k]);
    }
    p.coeffs[k] = d[k];
  }
  return p;
}

Jet polynomial_jet(const std::vector<Complex>& coeffs, Complex z, int order) {
  // repeated synthetic division by (w - z)
  std::vector<Complex> c = coeffs;
  Jet out(order + 1, Complex(0));
  for (int k = 0; k <= order && !c.empty(); ++k) {
    Complex r = 0;
    std::vector<Complex> q(c.size() > 1 ? c.size() - 1 : 0);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      r = r * z + c[i];
      if (i > 0) q[i - 1] = r;
    }
    out[k] = r;
    c = std::move(q);
  }
  return out;
}

Complex polynomial_value(const std::vector<Complex>& coeffs, Complex z) {
  Complex r = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * z + *it;
  return r;
}

}  // namespace c0lab
