#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "c0lab/blaschke.hpp"
#include "c0lab/hermite.hpp"
#include "c0lab/model_space.hpp"
#include "c0lab/types.hpp"

namespace c0lab {

struct PickProblem {
  PickProblem(std::vector<DiskPoint> nodes, std::vector<Complex> targets);

  std::vector<DiskPoint> nodes;
  std::vector<Complex> targets;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Rational interpolant with a boundary-grid sup-norm certificate. Polynomial
/// interpolants additionally keep their Newton form, which is what gets
/// evaluated.
struct Interpolant {
  std::vector<Complex> numerator;    // ascending coefficients
  std::vector<Complex> denominator;  // ascending coefficients
  std::optional<NewtonPolynomial> newton;

  double certified_norm = 0;
  int grid_size = tol::norm_grid_size;
  double slack = tol::norm_grid_slack;
  /// Pick value c* used to build the interpolant (extremal constructions only).
  std::optional<double> pick_value;

  std::vector<Complex> nodes;
  std::vector<Complex> achieved_values;

  Complex evaluate(Complex z) const;
  FunctionSpec function() const;
};

/// P_ij = (c^2 - w_i conj(w_j)) / (1 - l_i conj(l_j)).
CMatrix pick_matrix(const PickProblem& problem, double c);

/// PSD test used throughout: lambda_min >= -1e-12 * (trace / n).
bool pick_is_psd(const PickProblem& problem, double c);

/// Smallest c with a PSD Pick matrix, by bisection to relative width 1e-10.
/// Returns 0 when all targets vanish.
double minimal_norm(const PickProblem& problem);

/// sup |f| over an n-point uniform grid on the unit circle.
template <typename F>
double boundary_sup_norm(const F& f, int n = tol::norm_grid_size) {
  double m = 0;
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(f(std::polar(1.0, 2 * M_PI * k / n)));
    if (a > m) m = a;
  }
  return m;
}

/// Extremal Nevanlinna-Pick solution built from the kernel vector of the Pick
/// matrix at c*: f = c*^2 * sum v_j k_j / sum conj(w_j) v_j k_j with
/// k_j(z) = 1 / (1 - conj(l_j) z). Throws DegenerateKernel when the kernel is
/// numerically more than one-dimensional.
Interpolant degenerate_interpolant(const PickProblem& problem);

/// phi_A: 1 on the indices in `subset`, 0 elsewhere. Simple zeros use the
/// extremal Pick solution; zeros with multiplicity use flattening_interpolant
/// with M = max multiplicity.
Interpolant indicator_interpolant(const ZeroSet& zeros, const std::vector<int>& subset);

inline constexpr int max_flattening_conditions = 64;

/// Taylor jets (value, then M zero derivatives) prescribed by the flattening
/// construction.
std::vector<Jet> flattening_jets(const std::vector<Complex>& values, int m);

/// Hermite polynomial with p(l_j) = values[j] and p^{(k)}(l_j) = 0 for 1 <= k <= M.
Interpolant flattening_interpolant(const ZeroSet& zeros, const std::vector<Complex>& values, int m);

struct InterpolationConstant {
  double value = 0;              // max certified norm over tested subsets
  std::vector<int> argmax;       // maximizing subset
  std::size_t subsets_tested = 0;
  std::size_t degenerate = 0;    // subsets whose extremal kernel was ambiguous (c* used)
  bool sampled = false;          // true when n exceeded the exhaustive limit
};

/// Empirical constant of interpolation: max over indicator sets A of the
/// certified norm of phi_A. Exhaustive for n <= exhaustive_limit, otherwise
/// `samples` seeded random subsets.
InterpolationConstant empirical_interpolation_constant(const ZeroSet& zeros, int exhaustive_limit = 12,
                                                       int samples = 4096, std::uint64_t seed = 1);

}  // namespace c0lab
