#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace c0lab {

template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = ComplexT<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = Eigen::VectorXd;

/// Default numerical policy shared by every module.
namespace tol {
inline constexpr double rank_cutoff = 1e-10;     // relative to sigma_max
inline constexpr double annihilation = 1e-8;     // ||theta(T)||
inline constexpr double boundary_modulus = 1e-12;
inline constexpr double zero_value = 1e-12;      // |u(lambda_j)| treated as 0
inline constexpr double inverse_check = 1e-10;   // ||X X^-1 - I||
inline constexpr double inverse_rounding = 16 * 0x1.0p-52;  // times cond(X), floor of the same check
inline constexpr double bound_slack = 1e-8;      // relative slack on predicted bounds
inline constexpr double norm_grid_slack = 1e-6;  // sup-norm certificate slack
inline constexpr int norm_grid_size = 4096;
}  // namespace tol

enum class ErrorKind {
  InvalidArgument,
  UnsupportedOrder,
  AnnihilationFailed,
  UnsupportedFunction,
  CombinatorialLimit,
  DegenerateKernel,
  PartitionViolation,
  IllConditionedGroup,
  NotDiagonalizable,
  MultiplicityMismatch,
  NotNilpotent,
  NotContraction,
  NotCyclic,
  Stage,
};

const char* to_string(ErrorKind kind);

/// Every failure in the library is reported through this exception. `measured`
/// carries the offending quantity (a norm, a count) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double measured = 0.0, std::string stage = {})
      : std::runtime_error(message), kind_(kind), measured_(measured), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  double measured() const noexcept { return measured_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  double measured_;
  std::string stage_;
};

}  // namespace c0lab
