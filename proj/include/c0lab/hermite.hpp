#pragma once

#include <vector>

#include "c0lab/blaschke.hpp"
#include "c0lab/types.hpp"

namespace c0lab {

/// Polynomial in Newton form: c_0 + (z-x_0)(c_1 + (z-x_1)(c_2 + ...)).
struct NewtonPolynomial {
  std::vector<Complex> nodes;
  std::vector<Complex> coeffs;

  int size() const noexcept { return static_cast<int>(coeffs.size()); }
  Complex evaluate(Complex z) const;
  /// Taylor coefficients at z, by nested evaluation over truncated series.
  Jet jet(Complex z, int order) const;
  /// Nested evaluation at a square matrix.
  CMatrix evaluate(const CMatrix& t) const;
  /// Ascending monomial coefficients.
  std::vector<Complex> monomial() const;
};

/// Newton form of a monomial-coefficient polynomial (all nodes at 0).
NewtonPolynomial newton_from_monomial(std::vector<Complex> coeffs);

/// Confluent Hermite interpolation. Point j carries `counts[j]` conditions
/// (value and derivatives up to counts[j]-1) read from the Taylor jet
/// `jets[j]`. Nodes are grouped by point, in the given point order.
NewtonPolynomial hermite_interpolate(const std::vector<Complex>& points, const std::vector<Jet>& jets,
                                     const std::vector<int>& counts);

/// Taylor coefficients of a monomial-form polynomial at z.
Jet polynomial_jet(const std::vector<Complex>& coeffs, Complex z, int order);
Complex polynomial_value(const std::vector<Complex>& coeffs, Complex z);

}  // namespace c0lab
