#include "c0lab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "c0lab/linalg.hpp"

namespace c0lab {

const char* to_string(MarginMethod m) {
  return m == MarginMethod::ExactEnumeration ? "exact_enumeration" : "grid_estimate";
}

double closed_range_margin(const CMatrix& a) {
  const auto s = linalg::singular_values(a);
  if (s.size() == 0 || !(s(0) > tol::zero_value)) return 0.0;
  const double cutoff = std::max(tol::rank_cutoff * s(0), tol::zero_value);
  double best = s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) best = std::min<double>(best, s(i));
  return best;
}

MarginReport diagonal_closed_range(const FunctionSpec& u, const ZeroSet& zeros) {
  if (!zeros.is_simple()) throw Error(ErrorKind::InvalidArgument, "diagonal_closed_range needs simple zeros");
  MarginReport r;
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    const double v = std::abs(u.value(zeros.point(j)));
    if (v > tol::zero_value && v < r.margin) {
      r.margin = v;
      r.witness_index = static_cast<int>(j);
    }
  }
  r.witness = r.witness_index ? "j=" + std::to_string(*r.witness_index) : "u(D)=0";
  return r;
}

namespace {

std::string exponent_label(const std::vector<int>& k) {
  std::ostringstream os;
  os << "k=[";
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << "]";
  return os.str();
}

int exponent_degree(const std::vector<int>& k) {
  int d = 0;
  for (int v : k) d += v;
  return d;
}

}  // namespace

double divisor_margin(const BlaschkeProduct& theta, const CMatrix& t, const std::vector<int>& exponents) {
  const BlaschkeProduct u = divisor_from_exponents(theta.zeros(), exponents);
  return closed_range_margin(hermite_calculus(t, theta, FunctionSpec::blaschke(u)));
}

MarginReport divisor_sweep(const BlaschkeProduct& theta, const std::optional<CMatrix>& t) {
  const ZeroSet& z = theta.zeros();
  if (divisor_count(z) > max_divisor_count)
    throw Error(ErrorKind::CombinatorialLimit, "inner divisor enumeration exceeds 2^16", double(divisor_count(z)));
  std::optional<CMatrix> op = t;
  if (!op && !z.is_simple()) op = jordan_model(theta);
  if (op) {
    const double a = linalg::spectral_norm(theta.evaluate(*op));
    if (!(a <= tol::annihilation))
      throw Error(ErrorKind::AnnihilationFailed, "theta(T) is not negligible: ||theta(T)|| = " + std::to_string(a), a);
  }

  const auto divisors = inner_divisors(theta);
  MarginReport r;
  int best_degree = -1;
  for (std::size_t i = 1; i + 1 < divisors.size(); ++i) {
    const auto& d = divisors[i];
    const FunctionSpec u = FunctionSpec::blaschke(d.product);
    double v;
    if (op) {
      v = closed_range_margin(hermite_polynomial(theta, u).evaluate(*op));
      if (v == 0) v = std::numeric_limits<double>::infinity();
    } else {
      v = diagonal_closed_range(u, z).margin;
    }
    r.entries.push_back({d.exponents, v});
    if (!std::isfinite(v)) continue;
    const int deg = exponent_degree(d.exponents);
    const bool better = best_degree < 0 || v < r.margin * (1 - 1e-14) ||
                        (std::abs(v - r.margin) <= 1e-14 * r.margin && deg > best_degree);
    if (better) {
      r.margin = v;
      r.witness_exponents = d.exponents;
      best_degree = deg;
    }
  }
  if (best_degree < 0) {
    r.margin = 1.0;
    r.witness_exponents.assign(z.size(), 0);
    r.witness = "u=1 (no proper divisor with a finite margin)";
  } else {
    r.witness = exponent_label(r.witness_exponents);
  }
  return r;
}

// --- adversarial construction ----------------------------------------------

bool relation_holds(const std::string& relation, double lhs, double rhs) {
  if (relation == "<") return lhs < rhs;
  if (relation == "<=") return lhs <= rhs;
  if (relation == ">=") return lhs >= rhs;
  throw Error(ErrorKind::InvalidArgument, "unknown relation " + relation);
}

namespace {

double product_modulus(const std::vector<Complex>& l, const std::vector<int>& removed, int point, int truncation) {
  double p = 1;
  for (int j = 0; j < truncation; ++j)
    if (std::find(removed.begin(), removed.end(), j) == removed.end()) p *= pseudo_distance(l[j], l[point]);
  return p;
}

}  // namespace

bool replay(const InequalityRecord& rec, const ZeroSet& zeros, double rel_tol) {
  const auto l = zeros.points();
  const double lhs = rec.kind == "separation" ? pseudo_distance(l.at(rec.a), l.at(rec.b))
                                              : product_modulus(l, rec.removed, rec.point, rec.truncation);
  if (std::abs(lhs - rec.lhs) > rel_tol * std::max(1e-300, std::abs(rec.lhs))) return false;
  return relation_holds(rec.relation, lhs, rec.rhs) && rec.pass;
}

AdversarialResult adversarial_divisor(const ZeroSet& zeros, int budget) {
  if (!zeros.is_simple()) throw Error(ErrorKind::InvalidArgument, "adversarial_divisor needs simple zeros");
  const auto l = zeros.points();
  const int n = static_cast<int>(l.size());
  if (budget < 0 || budget > n) throw Error(ErrorKind::InvalidArgument, "budget must lie in [0, length]", budget);

  AdversarialResult out;
  auto product_record = [&](int stage, std::vector<int> removed, int point, int trunc, const char* rel, double rhs) {
    InequalityRecord r;
    r.stage = stage;
    r.kind = "product";
    r.relation = rel;
    r.removed = std::move(removed);
    r.point = point;
    r.truncation = trunc;
    r.lhs = product_modulus(l, r.removed, point, trunc);
    r.rhs = rhs;
    r.pass = relation_holds(rel, r.lhs, rhs);
    return r;
  };

  std::vector<int> chosen;
  int last_m = 0;
  double alpha_prod = 1;
  for (int k = 1; k <= budget; ++k) {
    const double next_alpha = k >= 2 ? alpha_prod * adversarial_alpha(k) : 1.0;
    bool accepted = false;
    for (int cand = last_m; cand < n && !accepted; ++cand) {
      std::vector<InequalityRecord> recs;
      std::vector<int> removed = chosen;
      removed.push_back(cand);
      auto ok = [&](InequalityRecord r) {
        recs.push_back(std::move(r));
        return recs.back().pass;
      };
      bool good = ok(product_record(k, {cand}, cand, n, "<", std::ldexp(1.0, -(k + 1))));
      for (int p = 0; good && p < k - 1; ++p) {
        InequalityRecord s;
        s.stage = k;
        s.kind = "separation";
        s.relation = ">=";
        s.a = cand;
        s.b = chosen[p];
        s.lhs = pseudo_distance(l[cand], l[chosen[p]]);
        s.rhs = 1.0 / adversarial_alpha(k);
        s.pass = s.lhs >= s.rhs;
        good = ok(s);
      }
      if (good && k >= 2) {
        good = ok(product_record(k, removed, cand, n, "<=", std::ldexp(1.0, -(k + 1)) * next_alpha));
        for (int p = 0; good && p < k - 1; ++p)
          good = ok(product_record(k, removed, chosen[p], n, "<=", std::ldexp(1.0, -(p + 2)) * next_alpha));
      }
      if (!good) {
        ++out.candidates_rejected;
        continue;
      }
      // truncation m > cand: the partial product stays below the relaxed bounds
      for (int m = cand + 1; m <= n && !accepted; ++m) {
        std::vector<InequalityRecord> trunc;
        bool tgood = true;
        trunc.push_back(product_record(k, removed, cand, m, k == 1 ? "<" : "<=", std::ldexp(1.0, -k) * next_alpha));
        tgood = trunc.back().pass;
        for (int p = 0; tgood && p < k - 1; ++p) {
          trunc.push_back(product_record(k, removed, chosen[p], m, "<=", std::ldexp(1.0, -(p + 1)) * next_alpha));
          tgood = trunc.back().pass;
        }
        if (!tgood) continue;
        accepted = true;
        chosen.push_back(cand);
        last_m = m;
        alpha_prod = next_alpha;
        out.truncations.push_back(m);
        for (auto& r : recs) out.log.push_back(std::move(r));
        for (auto& r : trunc) out.log.push_back(std::move(r));
      }
      if (!accepted) ++out.candidates_rejected;
    }
    if (!accepted) {
      out.stage_exhausted = true;
      out.exhausted_stage = k;
      break;
    }
    out.stages_completed = k;
  }
  out.chosen = chosen;
  out.alpha_product = alpha_prod;

  if (out.stages_completed == 0 && out.stage_exhausted) {
    int argmin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n; ++c) {
      const double v = product_modulus(l, {c}, c, n);
      if (v < best) {
        best = v;
        argmin = c;
      }
    }
    for (int j = 0; j < n; ++j)
      if (j != argmin) out.divisor_indices.push_back(j);
  } else {
    for (int j = 0; j < last_m; ++j)
      if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) out.divisor_indices.push_back(j);
  }
  std::vector<ZeroEntry> entries;
  for (int j : out.divisor_indices) entries.push_back({zeros.entries()[j].point, 1});
  out.divisor = entries.empty() ? BlaschkeProduct::unit() : BlaschkeProduct(ZeroSet(std::move(entries)));
  for (int j = 0; j < n; ++j) {
    const double v = std::abs(out.divisor.evaluate(l[j]));
    if (v > tol::zero_value) out.min_nonzero_value = std::min(out.min_nonzero_value, v);
  }
  return out;
}

// --- corona margins -----------------------------------------------------------

CoronaGridSpec CoronaGridSpec::refined(int factor) const {
  CoronaGridSpec s = *this;
  const int f = std::max(1, static_cast<int>(std::lround(std::sqrt(double(factor)))));
  s.radial *= f;
  s.angular *= f;
  s.local_radial *= f;
  s.local_angular *= f;
  return s;
}

std::vector<Complex> corona_grid(const std::vector<BlaschkeProduct>& factors, const CoronaGridSpec& spec) {
  std::vector<Complex> g{0.0};
  const double rho_max = 2 * std::atanh(spec.max_modulus);
  for (int i = 1; i <= spec.radial; ++i) {
    const double r = std::tanh(0.5 * rho_max * i / spec.radial);
    const double offset = (i % 2) * M_PI / spec.angular;
    for (int a = 0; a < spec.angular; ++a) g.push_back(std::polar(r, offset + 2 * M_PI * a / spec.angular));
  }
  for (const auto& f : factors)
    for (const auto& e : f.zeros().entries()) {
      const Complex c = e.point.value();
      g.push_back(c);
      for (int i = 1; i <= spec.local_radial; ++i) {
        const double r = spec.local_radius * i / spec.local_radial;
        for (int a = 0; a < spec.local_angular; ++a) {
          const Complex w = std::polar(r, 2 * M_PI * a / spec.local_angular);
          g.push_back((c + w) / (1.0 + std::conj(c) * w));
        }
      }
    }
  return g;
}

CoronaReport corona_margin(const std::vector<BlaschkeProduct>& factors, int power, const std::vector<Complex>& grid) {
  const int f = static_cast<int>(factors.size());
  if (f > max_corona_factors)
    throw Error(ErrorKind::CombinatorialLimit, "corona subsets exceed 2^16", f);
  if (power < 1) throw Error(ErrorKind::InvalidArgument, "corona exponent must be >= 1", power);
  const std::uint32_t full = (std::uint32_t(1) << f) - 1;
  CoronaReport out;
  out.grid_points = grid.size();
  out.report.method = MarginMethod::GridEstimate;
  out.margin_power_one = std::numeric_limits<double>::infinity();
  std::vector<double> prod(std::size_t(full) + 1);
  std::uint32_t best_mask = 0;
  std::size_t best_point = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    prod[0] = 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int low = __builtin_ctz(mask);
      prod[mask] = prod[mask & (mask - 1)] * std::abs(factors[low].evaluate(grid[p]));
    }
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
      const double a = prod[mask], b = prod[full ^ mask];
      const double v = std::pow(a, power) + std::pow(b, power);
      if (v < out.report.margin) {
        out.report.margin = v;
        best_mask = mask;
        best_point = p;
      }
      out.margin_power_one = std::min(out.margin_power_one, a + b);
    }
  }
  for (int j = 0; j < f; ++j) out.report.witness_exponents.push_back(best_mask >> j & 1u);
  if (!grid.empty()) out.report.witness_point = grid[best_point];
  std::ostringstream os;
  os << "sigma=" << exponent_label(out.report.witness_exponents).substr(2);
  if (!grid.empty()) os << " z=" << grid[best_point].real() << (grid[best_point].imag() < 0 ? "" : "+")
                        << grid[best_point].imag() << "i";
  out.report.witness = os.str();
  out.power_comparison = out.report.margin <= out.margin_power_one * (1 + 1e-15);
  return out;
}

CoronaReport corona_margin(const std::vector<BlaschkeProduct>& factors, int power, const CoronaGridSpec& spec) {
  return corona_margin(factors, power, corona_grid(factors, spec));
}

// --- block divisor margins ----------------------------------------------------

BlockMarginReport block_divisor_margin(const std::vector<BlockSpec>& blocks, const std::vector<int>& k) {
  if (k.size() != blocks.size()) throw Error(ErrorKind::InvalidArgument, "one exponent per block required");
  std::vector<ZeroEntry> entries;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (k[j] < 0 || k[j] > blocks[j].multiplicity)
      throw Error(ErrorKind::InvalidArgument, "block exponent outside [0, m_j]", k[j]);
    entries.push_back({blocks[j].lambda, blocks[j].multiplicity});
  }
  const ZeroSet all(entries);
  std::vector<int> full_exp;
  for (const auto& b : blocks) full_exp.push_back(b.multiplicity);

  BlockMarginReport out;
  out.full_divisor_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const BlaschkeProduct local(ZeroSet({entries[j]}));
    const double ann = linalg::spectral_norm(local.evaluate(blocks[j].t));
    if (!(ann <= tol::annihilation))
      throw Error(ErrorKind::AnnihilationFailed, "block " + std::to_string(j) + " is not annihilated", ann, "block");
    auto apply = [&](const BlaschkeProduct& u) {
      return hermite_calculus(blocks[j].t, local, FunctionSpec::blaschke(u), std::numeric_limits<double>::infinity());
    };
    std::vector<int> own(blocks.size(), 0);
    own[j] = k[j];
    std::vector<int> cofactor = k;
    cofactor[j] = 0;
    std::vector<int> theta_rest = full_exp;
    theta_rest[j] = 0;

    const CMatrix f = apply(divisor_from_exponents(all, theta_rest));
    Eigen::JacobiSVD<CMatrix> svd(f);
    out.c2_estimate = std::max(out.c2_estimate, 1.0 / svd.singularValues().minCoeff());
    out.cofactor_norm = std::max(out.cofactor_norm, linalg::spectral_norm(apply(divisor_from_exponents(all, cofactor))));
    if (k[j] == blocks[j].multiplicity) continue;
    const double m = closed_range_margin(apply(divisor_from_exponents(all, own)));
    if (m < out.report.margin) {
      out.report.margin = m;
      out.report.witness_index = static_cast<int>(j);
    }
    out.full_divisor_margin =
        std::min(out.full_divisor_margin, closed_range_margin(apply(divisor_from_exponents(all, k))));
  }
  out.report.witness_exponents = k;
  out.report.witness = out.report.witness_index ? "block " + std::to_string(*out.report.witness_index) : "all blocks zero";
  out.cross_check = !std::isfinite(out.report.margin) ||
                    out.report.margin >= out.full_divisor_margin / std::max(out.c2_estimate, out.cofactor_norm) *
                                             (1 - 1e-10);
  return out;
}

}  // namespace c0lab
