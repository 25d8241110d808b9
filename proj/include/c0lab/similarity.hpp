#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c0lab/blaschke.hpp"
#include "c0lab/model_space.hpp"
#include "c0lab/types.hpp"

namespace c0lab {

/// X with X T X^-1 ~ target. Norms and residuals are measured, never assumed.
struct SimilarityCertificate {
  std::string stage;
  CMatrix x;
  CMatrix x_inv;
  std::optional<CMatrix> target;
  double residual = 0;   // ||X T X^-1 - target||, or the stage's own defect when there is no target
  double tolerance = 0;  // declared by the producing operation
  double norm_x = 0;
  double norm_x_inv = 0;
  std::optional<double> predicted_bound;
  std::string bound_formula;
  double seconds = 0;

  double inverse_defect() const;
  /// ||X X^-1 - I|| within max(1e-10, 16 u ||X|| ||X^-1||).
  double inverse_tolerance() const { return std::max(tol::inverse_check, tol::inverse_rounding * norm_x * norm_x_inv); }
  bool inverse_ok() const { return inverse_defect() <= inverse_tolerance(); }
  bool residual_ok() const { return residual <= tolerance; }
  bool bound_ok() const { return !predicted_bound || norm_x_inv <= *predicted_bound * (1 + tol::bound_slack); }
  bool valid() const { return inverse_ok() && residual_ok() && bound_ok(); }
};

/// Fills norms and, when a target is given, the residual ||X T X_inv - target||.
SimilarityCertificate make_certificate(std::string stage, CMatrix x, CMatrix x_inv, const CMatrix& t,
                                       std::optional<CMatrix> target, double tolerance);

/// g_A = 2 P_A - I over all subsets A of {0..n-1} (bit j of the mask selects
/// index j). Elements are materialized up front for n <= 10 and computed on
/// demand above that.
class GroupRep {
 public:
  static constexpr int eager_limit = 10;
  static constexpr int max_generators = 16;

  explicit GroupRep(std::vector<CMatrix> projections);

  int generators() const noexcept { return static_cast<int>(projections_.size()); }
  std::uint32_t order() const noexcept { return std::uint32_t(1) << generators(); }
  Eigen::Index dim() const noexcept { return dim_; }
  bool lazy() const noexcept { return cache_.empty(); }
  const std::vector<CMatrix>& projections() const noexcept { return projections_; }

  CMatrix idempotent(std::uint32_t mask) const;
  CMatrix element(std::uint32_t mask) const;
  double max_norm() const noexcept { return max_norm_; }

 private:
  std::vector<CMatrix> projections_;
  Eigen::Index dim_ = 0;
  std::map<std::uint32_t, CMatrix> cache_;
  double max_norm_ = 0;
};

inline std::uint32_t group_product_mask(std::uint32_t a, std::uint32_t b, std::uint32_t full) {
  return (a & b) | (~a & ~b & full);
}

/// Validates the partition (idempotent, summing to I, mutually annihilating,
/// each to 1e-8) and builds the group. Throws PartitionViolation with the
/// offending norm.
GroupRep build_group(const std::vector<CMatrix>& projections);

/// max ||g_A g_B - g_{A.B}|| over `samples` seeded pairs.
double group_law_residual(const GroupRep& group, int samples = 64, std::uint64_t seed = 1);

struct DixmierResult {
  SimilarityCertificate certificate;  // residual = worst unitarity defect
  double max_unitarity_residual = 0;  // max_A ||(X g X^-1)*(X g X^-1) - I||
  double max_selfadjoint_residual = 0;  // max_j ||Q_j - Q_j*||, Q_j = X P_j X^-1
  double max_group_norm = 0;
  double min_average_eigenvalue = 0;
};

/// X = (2^-n sum_A g_A* g_A)^{1/2}. Throws IllConditionedGroup when the
/// average has an eigenvalue <= 1e-12.
DixmierResult dixmier_symmetrizer(const GroupRep& group);

struct BlockDecomposition {
  SimilarityCertificate certificate;  // target = block-diagonal part of X T X^-1
  std::vector<Complex> lambdas;
  std::vector<int> sizes;
  std::vector<CMatrix> blocks;        // X T X^-1 restricted to each H_j
  double off_block = 0;
  double min_principal_angle = 0;     // between the images X H_j
  DixmierResult dixmier;
};

/// Idempotents P_j = p_j(T) with p_j = 1 + O((z - l_j)^{m_j}) at l_j and
/// O((z - l_k)^{m_k}) elsewhere; for simple zeros these are the images of the
/// indicator interpolants, which enter only through their node values.
std::vector<CMatrix> spectral_idempotents(const CMatrix& t, const BlaschkeProduct& theta,
                                          double annihilation_limit = tol::annihilation);

/// Makes mutually skew idempotents summing to I orthogonal, then rotates each
/// range onto consecutive coordinates.
BlockDecomposition orthogonalize_projections(const CMatrix& t, const std::vector<Complex>& lambdas,
                                             const std::vector<CMatrix>& projections, double tolerance);

/// X T X^-1 = diag(l_j) for T annihilated by the simple product over `zeros`.
BlockDecomposition diagonalize(const CMatrix& t, const ZeroSet& zeros, double tolerance = tol::annihilation);
BlockDecomposition diagonalize(const CMatrix& t, const ZeroSet& zeros, const std::vector<CMatrix>& projections,
                               double tolerance = tol::annihilation);

/// X T X^-1 = T|H_1 (+) ... (+) T|H_n with H_j = ker b_j^{m_j}(T) made orthogonal.
/// Throws MultiplicityMismatch when dim H_j != m_j.
BlockDecomposition orthogonalize_blocks(const CMatrix& t, const BlaschkeProduct& theta,
                                        double tolerance = tol::annihilation);

struct NilpotentSimilarity {
  SimilarityCertificate certificate;  // target = S(z^n)
  double epsilon = 1;                 // smallest singular value of N on (ker N)^perp
  CVector cyclic;                     // xi' with X N^k xi' = e_k
  std::vector<Complex> coefficients;  // a_0 .. a_{n-2}
};

/// X N X^-1 = S(z^n) with ||X|| <= 1 and ||X^-1|| <= eps^{-2(n-1)} for a
/// multiplicity-free nilpotent contraction of order n.
NilpotentSimilarity nilpotent_similarity(const CMatrix& n_mat, int n);

struct BlockCertificate {
  Complex lambda;
  int multiplicity = 0;
  double scale = 1;           // nilpotent part rescaled by max(1, ||b(T_j)||)
  double epsilon = 1;
  double crown_distance = 0;
  SimilarityCertificate certificate;  // X_j T_j X_j^-1 = S(b^{m_j})
};

struct StageRecord {
  std::string name;
  double residual = 0;
  double condition = 1;
  double seconds = 0;
};

struct JordanOptions {
  double residual_tolerance = 1e-8;
  double annihilation = tol::annihilation;
  double hypothesis_floor = 1e-3;
  bool certify_compressed_shift = true;
  bool check_hypothesis = true;
};

struct JordanModelResult {
  SimilarityCertificate to_model;     // target = (+)_j S(b_j^{m_j})
  std::optional<SimilarityCertificate> to_compressed_shift;  // target = S(theta)
  std::vector<BlockCertificate> blocks;
  BlockDecomposition decomposition;
  double sup_block_norm = 0;          // sup_j max(||X_j||, ||X_j^-1||)
  double composition_bound = 0;       // max_j r_j + cond(Z) r_R
  std::vector<StageRecord> stages;
  std::optional<double> model_sweep_margin;
  std::optional<double> operator_sweep_margin;
  std::vector<std::string> warnings;
};

/// Full pipeline: orthogonalize the root subspaces, move each block's
/// nilpotent part onto the shift, align with S(b^m), and assemble.
/// Stage errors are rethrown with ErrorKind preserved and the stage name set.
JordanModelResult jordan_model_similarity(const CMatrix& t, const BlaschkeProduct& theta,
                                          const JordanOptions& options = {});

}  // namespace c0lab
