#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "c0lab/types.hpp"

// Small dense helpers used across modules. All rank decisions go through
// `numerical_rank` / `smallest_nonzero_singular_value` so the cutoff policy
// (relative to sigma_max) lives in one place.
namespace c0lab::linalg {

template <typename Derived>
Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1>
singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Plain> svd(a.eval());
  return svd.singularValues();
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return singular_values(a)(0);
}

template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& a, double rel_cutoff = tol::rank_cutoff) {
  const auto s = singular_values(a);
  if (s.size() == 0 || s(0) == 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_cutoff * s(0)) ++r;
  return r;
}

/// Smallest singular value strictly above rel_cutoff * sigma_max; 0 for the zero matrix.
template <typename Derived>
double smallest_nonzero_singular_value(const Eigen::MatrixBase<Derived>& a, double rel_cutoff = tol::rank_cutoff) {
  const auto s = singular_values(a);
  if (s.size() == 0 || s(0) == 0) return 0.0;
  double best = s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_cutoff * s(0)) best = std::min<double>(best, s(i));
  return best;
}

template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& a) {
  const auto s = singular_values(a);
  if (s.size() == 0) return 1.0;
  return s(s.size() - 1) == 0 ? INFINITY : double(s(0) / s(s.size() - 1));
}

/// Orthonormal basis for the numerical range of `a` (left singular vectors).
CMatrix orthonormal_range(const CMatrix& a, double rel_cutoff = tol::rank_cutoff);

/// Orthonormal basis for the numerical kernel of `a`.
CMatrix orthonormal_kernel(const CMatrix& a, double rel_cutoff = tol::rank_cutoff);

struct HermitianRoot {
  CMatrix root;
  CMatrix inverse_root;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
};

/// Positive square root of a Hermitian positive semidefinite matrix via eigendecomposition.
HermitianRoot hermitian_sqrt(const CMatrix& h);

/// Unitary factor U of the polar decomposition K = U P.
CMatrix polar_unitary(const CMatrix& k);

/// Dimension of the Krylov space of (t, v), measured by Arnoldi with
/// reorthogonalization; a step is a breakdown when the new direction is
/// below rel_cutoff * max(||t||, 1) * ||v||.
int krylov_rank(const CMatrix& t, const CVector& v, double rel_cutoff = tol::rank_cutoff);

/// Smallest principal angle between the column spans of two matrices.
double min_principal_angle(const CMatrix& a, const CMatrix& b);

CMatrix block_diagonal(const std::vector<CMatrix>& blocks);

/// Mass of `a` outside the diagonal blocks of the given sizes (spectral norm).
double off_block_norm(const CMatrix& a, const std::vector<int>& block_sizes);

/// Nilpotent shift e_k -> e_{k+1}, e_{n-1} -> 0: the matrix of S(z^n).
CMatrix shift_matrix(int n);

}  // namespace c0lab::linalg
