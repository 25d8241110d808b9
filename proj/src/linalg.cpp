#include "c0lab/linalg.hpp"

#include <numeric>

namespace c0lab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::AnnihilationFailed: return "annihilation-failed";
    case ErrorKind::UnsupportedFunction: return "unsupported-function";
    case ErrorKind::CombinatorialLimit: return "combinatorial-limit";
    case ErrorKind::DegenerateKernel: return "degenerate-kernel";
    case ErrorKind::PartitionViolation: return "partition-violation";
    case ErrorKind::IllConditionedGroup: return "ill-conditioned-group";
    case ErrorKind::NotDiagonalizable: return "not-diagonalizable";
    case ErrorKind::MultiplicityMismatch: return "multiplicity-mismatch";
    case ErrorKind::NotNilpotent: return "not-nilpotent";
    case ErrorKind::NotContraction: return "not-contraction";
    case ErrorKind::NotCyclic: return "not-cyclic";
    case ErrorKind::Stage: return "stage-error";
  }
  return "unknown";
}

namespace linalg {

CMatrix orthonormal_range(const CMatrix& a, double rel_cutoff) {
  if (a.size() == 0) return CMatrix(a.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_cutoff * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

CMatrix orthonormal_kernel(const CMatrix& a, double rel_cutoff) {
  const Eigen::Index n = a.cols();
  if (a.size() == 0) return CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_cutoff * s(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

HermitianRoot hermitian_sqrt(const CMatrix& h) {
  const CMatrix sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  const RVector& ev = es.eigenvalues();
  HermitianRoot out;
  out.min_eigenvalue = ev.size() ? ev(0) : 0.0;
  out.max_eigenvalue = ev.size() ? ev(ev.size() - 1) : 0.0;
  RVector root = ev.cwiseMax(0.0).cwiseSqrt();
  RVector inv = root.unaryExpr([](double x) { return x > 0 ? 1.0 / x : 0.0; });
  const CMatrix& v = es.eigenvectors();
  out.root = v * root.cast<Complex>().asDiagonal() * v.adjoint();
  out.inverse_root = v * inv.cast<Complex>().asDiagonal() * v.adjoint();
  return out;
}

CMatrix polar_unitary(const CMatrix& k) {
  Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

int krylov_rank(const CMatrix& t, const CVector& v, double rel_cutoff) {
  const Eigen::Index n = t.rows();
  if (n == 0 || v.norm() == 0) return 0;
  const double scale = std::max(spectral_norm(t), 1.0);
  std::vector<CVector> basis;
  basis.push_back(v / v.norm());
  while (static_cast<Eigen::Index>(basis.size()) < n) {
    CVector w = t * basis.back();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q * q.dot(w);
    const double h = w.norm();
    if (h <= rel_cutoff * scale) break;
    basis.push_back(w / h);
  }
  return static_cast<int>(basis.size());
}

double min_principal_angle(const CMatrix& a, const CMatrix& b) {
  if (a.cols() == 0 || b.cols() == 0) return M_PI / 2;
  const CMatrix qa = orthonormal_range(a);
  const CMatrix qb = orthonormal_range(b);
  const double c = std::min(1.0, spectral_norm(CMatrix(qa.adjoint() * qb)));
  return std::acos(c);
}

CMatrix block_diagonal(const std::vector<CMatrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  CMatrix out = CMatrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

double off_block_norm(const CMatrix& a, const std::vector<int>& block_sizes) {
  CMatrix off = a;
  Eigen::Index o = 0;
  for (int s : block_sizes) {
    off.block(o, o, s, s).setZero();
    o += s;
  }
  return spectral_norm(off);
}

CMatrix shift_matrix(int n) {
  CMatrix s = CMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) s(k + 1, k) = 1.0;
  return s;
}

}  // namespace linalg
}  // namespace c0lab
