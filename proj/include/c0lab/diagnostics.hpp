#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "c0lab/blaschke.hpp"
#include "c0lab/model_space.hpp"
#include "c0lab/types.hpp"

namespace c0lab {

enum class MarginMethod { ExactEnumeration, GridEstimate };
const char* to_string(MarginMethod m);

struct MarginEntry {
  std::vector<int> exponents;
  double value = 0;
};

struct MarginReport {
  double margin = std::numeric_limits<double>::infinity();
  MarginMethod method = MarginMethod::ExactEnumeration;
  std::string witness;
  std::vector<int> witness_exponents;  // divisor sweeps and corona subsets
  std::optional<int> witness_index;
  std::optional<Complex> witness_point;
  std::vector<MarginEntry> entries;    // one per evaluated divisor, enumeration order
};

/// Smallest singular value above max(1e-10 * sigma_max, 1e-12); 0 when none is.
double closed_range_margin(const CMatrix& a);

/// min |u(l_j)| over the nodes where u does not vanish (|u| > 1e-12); +inf
/// with witness "u(D)=0" when u vanishes at every node.
MarginReport diagonal_closed_range(const FunctionSpec& u, const ZeroSet& zeros);

/// closed_range_margin(u(T)) for the divisor with the given exponents.
double divisor_margin(const BlaschkeProduct& theta, const CMatrix& t, const std::vector<int>& exponents);

/// Minimum closed-range margin over the proper inner divisors of theta
/// (u = 1 and u = theta are enumerated but left out of the minimum). Without
/// T, simple zeros use the diagonal model and repeated zeros use the Jordan
/// model (+)_j S(b_j^{m_j}). If no proper divisor has a finite margin the
/// result is 1, the margin of u = 1. Ties within 1e-14 go to the divisor of
/// larger degree.
MarginReport divisor_sweep(const BlaschkeProduct& theta, const std::optional<CMatrix>& t = std::nullopt);

/// One inequality of the adversarial construction. kind "product":
/// lhs = |prod_{j < truncation, j not in removed} b_{l_j}(l_point)|;
/// kind "separation": lhs = |b_{l_a}(l_b)|.
struct InequalityRecord {
  int stage = 0;
  std::string kind;
  std::string relation;  // "<", "<=", ">="
  std::vector<int> removed;
  int point = 0;
  int truncation = 0;
  int a = 0, b = 0;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

bool relation_holds(const std::string& relation, double lhs, double rhs);
/// Recomputes lhs from the zero sequence and re-evaluates the relation.
bool replay(const InequalityRecord& rec, const ZeroSet& zeros, double rel_tol = 1e-12);

struct AdversarialResult {
  BlaschkeProduct divisor = BlaschkeProduct::unit();
  std::vector<int> divisor_indices;    // indices of the zeros kept in the divisor
  std::vector<int> chosen;             // n_1, n_2, ...
  std::vector<int> truncations;        // m_1, m_2, ... (factor counts)
  int stages_completed = 0;
  bool stage_exhausted = false;
  int exhausted_stage = 0;
  int candidates_rejected = 0;
  double alpha_product = 1;            // prod_{mu=2}^k alpha_mu
  double min_nonzero_value = std::numeric_limits<double>::infinity();
  std::vector<InequalityRecord> log;   // accepted inequalities only
};

inline double adversarial_alpha(int k) { return 1.0 + std::ldexp(1.0, -(k - 1)); }

/// Greedy n_k / m_k selection with alpha_k = 1 + 2^{-(k-1)} over an ordered
/// finite sequence, for at most `budget` stages. When a stage finds no index,
/// the previous partial product is returned (or b / b_{l_argmin} at stage 1)
/// with stage_exhausted set.
AdversarialResult adversarial_divisor(const ZeroSet& zeros, int budget);

struct CoronaGridSpec {
  int radial = 50;
  int angular = 200;
  int local_radial = 8;
  int local_angular = 16;
  double local_radius = 0.5;  // pseudo-hyperbolic radius of the refinement around each zero
  double max_modulus = 0.999;

  CoronaGridSpec refined(int factor) const;
};

/// Hyperbolic polar grid plus Moebius images of a small polar grid around
/// every zero of the factors.
std::vector<Complex> corona_grid(const std::vector<BlaschkeProduct>& factors, const CoronaGridSpec& spec = {});

struct CoronaReport {
  MarginReport report;          // inf over sigma and grid of |theta_s|^M + |theta_c|^M
  double margin_power_one = 0;  // same with M = 1
  bool power_comparison = true; // margin <= margin_power_one
  std::size_t grid_points = 0;
};

inline constexpr int max_corona_factors = 16;

CoronaReport corona_margin(const std::vector<BlaschkeProduct>& factors, int power, const std::vector<Complex>& grid);
CoronaReport corona_margin(const std::vector<BlaschkeProduct>& factors, int power, const CoronaGridSpec& spec = {});

struct BlockSpec {
  CMatrix t;
  DiskPoint lambda;
  int multiplicity = 1;
};

struct BlockMarginReport {
  MarginReport report;               // min over nonzero blocks of closed_range_margin(b_j^{k_j}(T_j))
  double full_divisor_margin = 0;    // same for phi(T_j), phi = prod_r b_r^{k_r}
  double c2_estimate = 0;            // max_j ||((theta / b_j^{m_j})(T_j))^{-1}||
  double cofactor_norm = 0;          // max_j ||(phi / b_j^{k_j})(T_j)||
  bool cross_check = true;           // margin >= full / max(c2, cofactor_norm)
};

BlockMarginReport block_divisor_margin(const std::vector<BlockSpec>& blocks, const std::vector<int>& exponents);

}  // namespace c0lab
