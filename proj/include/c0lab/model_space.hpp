#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "c0lab/blaschke.hpp"
#include "c0lab/hermite.hpp"
#include "c0lab/types.hpp"

namespace c0lab {

/// Takenaka-Malmquist orthonormal basis of the model space H(theta):
///   e_k(z) = sqrt(1 - |l_k|^2) / (1 - conj(l_k) z) * prod_{i<k} b_{l_i}(z)
/// over the multiplicity-expanded zero list.
class ModelBasis {
 public:
  explicit ModelBasis(BlaschkeProduct theta);

  const BlaschkeProduct& theta() const noexcept { return theta_; }
  int dim() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<Complex>& node_order() const noexcept { return nodes_; }

  /// (e_0(z), ..., e_{n-1}(z)).
  CVector evaluate(Complex z) const;

 private:
  BlaschkeProduct theta_;
  std::vector<Complex> nodes_;
};

ModelBasis model_basis(const BlaschkeProduct& theta);

/// S(theta) in the model basis, bundled with theta.
struct CompressedShift {
  BlaschkeProduct theta;
  CMatrix matrix;
};

CompressedShift jordan_block_matrix(const BlaschkeProduct& theta);

/// (+)_j S(b_j^{m_j}) over the zero entries of theta, in entry order.
CMatrix jordan_model(const BlaschkeProduct& theta);

/// A bounded holomorphic function that can report Taylor jets at interior
/// points: a polynomial, a Blaschke product, or a rational function whose
/// denominator has no zeros in the closed disk.
class FunctionSpec {
 public:
  struct Polynomial {
    NewtonPolynomial form;
  };
  struct Rational {
    std::vector<Complex> numerator;
    std::vector<Complex> denominator;
  };

  /// Ascending monomial coefficients.
  static FunctionSpec polynomial(std::vector<Complex> coeffs);
  static FunctionSpec polynomial(NewtonPolynomial form);
  static FunctionSpec blaschke(BlaschkeProduct b);
  /// Validates the denominator's roots against the closed disk (margin 1e-8).
  static FunctionSpec rational(std::vector<Complex> numerator, std::vector<Complex> denominator);
  static FunctionSpec constant(Complex c) { return polynomial({c}); }

  Complex value(Complex z) const;
  Jet jet(Complex z, int order) const;

  const std::variant<Polynomial, BlaschkeProduct, Rational>& representation() const noexcept { return rep_; }

 private:
  explicit FunctionSpec(std::variant<Polynomial, BlaschkeProduct, Rational> rep) : rep_(std::move(rep)) {}
  std::variant<Polynomial, BlaschkeProduct, Rational> rep_;
};

/// Smallest modulus among the roots of a polynomial (+inf for constants).
double min_root_modulus(const std::vector<Complex>& coeffs);
Jet rational_jet(const std::vector<Complex>& num, const std::vector<Complex>& den, Complex z, int order);

/// u(T) for a matrix annihilated by theta: p(T) where p is the Hermite
/// interpolant of u matching m_j conditions at each zero. Throws
/// AnnihilationFailed (measured = ||theta(T)||) when ||theta(T)|| > limit.
CMatrix hermite_calculus(const CMatrix& t, const BlaschkeProduct& theta, const FunctionSpec& u,
                         double annihilation_limit = tol::annihilation);

/// Same, with jets supplied directly per zero (jets[j] needs m_j coefficients).
CMatrix hermite_calculus(const CMatrix& t, const BlaschkeProduct& theta, const std::vector<Jet>& jets,
                         double annihilation_limit = tol::annihilation);

/// Hermite interpolant of u at the zeros of theta (degree < deg theta).
NewtonPolynomial hermite_polynomial(const BlaschkeProduct& theta, const FunctionSpec& u);

struct InnerDivisor {
  std::vector<int> exponents;  // k_j in [0, m_j], one per zero entry
  BlaschkeProduct product;
};

inline constexpr std::size_t max_divisor_count = std::size_t(1) << 16;

/// prod_j (m_j + 1).
std::size_t divisor_count(const ZeroSet& zeros);
/// Subproduct with the given exponents (empty product when all are 0).
BlaschkeProduct divisor_from_exponents(const ZeroSet& zeros, const std::vector<int>& exponents);
/// Every inner divisor, in mixed-radix order with the first zero varying fastest;
/// starts with u = 1 and ends with theta. Throws CombinatorialLimit above 2^16.
std::vector<InnerDivisor> inner_divisors(const BlaschkeProduct& theta);

/// ||A A* A - A||_2.
double partial_isometry_defect(const CMatrix& a);

struct CrownReport {
  double distance = 0;              // ||U* b(S) U - S(z^m)||
  double involution_residual = 0;   // max |phi(phi(z)) - z| on the grid, b = (conj(l)/|l|) phi
  CMatrix alignment;                // U
  CMatrix model;                    // S(b^m)
  CMatrix image;                    // b(S(b^m))
};

/// Unitary alignment of b_l(S(b_l^m)) with S(z^m), 1 <= m <= 12.
CrownReport crown_equivalence_check(const DiskPoint& lambda, int m);

/// Krylov dimension from a fixed pseudo-random start vector.
int cyclic_rank(const CMatrix& t);
inline bool is_multiplicity_free(const CMatrix& t) { return cyclic_rank(t) == t.rows(); }

}  // namespace c0lab
