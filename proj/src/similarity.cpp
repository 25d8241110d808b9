#include "c0lab/similarity.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "c0lab/diagnostics.hpp"
#include "c0lab/linalg.hpp"
#include "c0lab/random.hpp"

namespace c0lab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
auto staged(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw Error(e.kind(), e.what(), e.measured(), name);
  }
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

double SimilarityCertificate::inverse_defect() const {
  return linalg::spectral_norm(CMatrix(x * x_inv - identity(x.rows())));
}

SimilarityCertificate make_certificate(std::string stage, CMatrix x, CMatrix x_inv, const CMatrix& t,
                                       std::optional<CMatrix> target, double tolerance) {
  SimilarityCertificate c;
  c.stage = std::move(stage);
  c.norm_x = linalg::spectral_norm(x);
  c.norm_x_inv = linalg::spectral_norm(x_inv);
  if (target) c.residual = linalg::spectral_norm(CMatrix(x * t * x_inv - *target));
  c.x = std::move(x);
  c.x_inv = std::move(x_inv);
  c.target = std::move(target);
  c.tolerance = tolerance;
  return c;
}

GroupRep::GroupRep(std::vector<CMatrix> projections) : projections_(std::move(projections)) {
  if (projections_.empty()) throw Error(ErrorKind::InvalidArgument, "group needs at least one idempotent");
  if (generators() > max_generators)
    throw Error(ErrorKind::CombinatorialLimit, "group enumeration exceeds 2^16 elements", generators());
  dim_ = projections_.front().rows();
  for (std::uint32_t a = 0; a < order(); ++a) {
    CMatrix g = element(a);
    max_norm_ = std::max(max_norm_, linalg::spectral_norm(g));
    if (generators() <= eager_limit) cache_.emplace(a, std::move(g));
  }
}

CMatrix GroupRep::idempotent(std::uint32_t mask) const {
  CMatrix p = CMatrix::Zero(dim_, dim_);
  for (int j = 0; j < generators(); ++j)
    if (mask >> j & 1u) p += projections_[j];
  return p;
}

CMatrix GroupRep::element(std::uint32_t mask) const {
  if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
  return 2.0 * idempotent(mask) - identity(dim_);
}

GroupRep build_group(const std::vector<CMatrix>& projections) {
  if (projections.empty()) throw Error(ErrorKind::InvalidArgument, "no idempotents given");
  const Eigen::Index d = projections.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const CMatrix& p = projections[i];
    if (p.rows() != d || p.cols() != d) throw Error(ErrorKind::InvalidArgument, "idempotents differ in shape");
    const double idem = linalg::spectral_norm(CMatrix(p * p - p));
    if (idem > 1e-8)
      throw Error(ErrorKind::PartitionViolation, "P_" + std::to_string(i) + " is not idempotent", idem);
    for (std::size_t j = 0; j < i; ++j) {
      const double cross = std::max(linalg::spectral_norm(CMatrix(p * projections[j])),
                                    linalg::spectral_norm(CMatrix(projections[j] * p)));
      if (cross > 1e-8)
        throw Error(ErrorKind::PartitionViolation,
                    "P_" + std::to_string(i) + " and P_" + std::to_string(j) + " do not annihilate", cross);
    }
    sum += p;
  }
  const double total = linalg::spectral_norm(CMatrix(sum - identity(d)));
  if (total > 1e-8) throw Error(ErrorKind::PartitionViolation, "idempotents do not sum to I", total);
  return GroupRep(projections);
}

double group_law_residual(const GroupRep& group, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const std::uint32_t full = group.order() - 1;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const auto a = std::uint32_t(rng.next() & full);
    const auto b = std::uint32_t(rng.next() & full);
    const CMatrix lhs = group.element(a) * group.element(b);
    worst = std::max(worst, linalg::spectral_norm(CMatrix(lhs - group.element(group_product_mask(a, b, full)))));
  }
  return worst;
}

DixmierResult dixmier_symmetrizer(const GroupRep& group) {
  const auto start = Clock::now();
  const Eigen::Index d = group.dim();
  CMatrix avg = CMatrix::Zero(d, d);
  for (std::uint32_t a = 0; a < group.order(); ++a) {
    const CMatrix g = group.element(a);
    avg += g.adjoint() * g;
  }
  avg /= double(group.order());
  const auto root = linalg::hermitian_sqrt(avg);
  if (!(root.min_eigenvalue > 1e-12))
    throw Error(ErrorKind::IllConditionedGroup, "group average is not positive definite", root.min_eigenvalue);

  DixmierResult out;
  out.min_average_eigenvalue = root.min_eigenvalue;
  out.max_group_norm = group.max_norm();
  for (std::uint32_t a = 0; a < group.order(); ++a) {
    const CMatrix h = root.root * group.element(a) * root.inverse_root;
    out.max_unitarity_residual =
        std::max(out.max_unitarity_residual, linalg::spectral_norm(CMatrix(h.adjoint() * h - identity(d))));
  }
  for (const auto& p : group.projections()) {
    const CMatrix q = root.root * p * root.inverse_root;
    out.max_selfadjoint_residual = std::max(out.max_selfadjoint_residual, linalg::spectral_norm(CMatrix(q - q.adjoint())));
  }
  out.certificate = make_certificate("dixmier", root.root, root.inverse_root, CMatrix::Zero(d, d), std::nullopt, 1e-9);
  out.certificate.residual = out.max_unitarity_residual;
  out.certificate.seconds = seconds_since(start);
  return out;
}

namespace {

// P <- 3P^2 - 2P^3 while the idempotency defect keeps shrinking; the limit
// is the spectral projection of the eigenvalues where p(T) is near 1.
CMatrix polish_idempotent(CMatrix p) {
  double defect = linalg::spectral_norm(CMatrix(p * p - p));
  for (int it = 0; it < 8 && defect > 0 && defect < 0.25; ++it) {
    const CMatrix p2 = p * p;
    const CMatrix next = 3 * p2 - 2 * p2 * p;
    const double d = linalg::spectral_norm(CMatrix(next * next - next));
    if (!(d < defect)) break;
    p = next;
    defect = d;
  }
  return p;
}

}  // namespace

std::vector<CMatrix> spectral_idempotents(const CMatrix& t, const BlaschkeProduct& theta, double annihilation_limit) {
  if (t.rows() != t.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  const double a = linalg::spectral_norm(theta.evaluate(t));
  if (!(a <= annihilation_limit))
    throw Error(ErrorKind::AnnihilationFailed, "theta(T) is not negligible: ||theta(T)|| = " + std::to_string(a), a);
  const ZeroSet& z = theta.zeros();
  std::vector<int> counts;
  for (const auto& e : z.entries()) counts.push_back(e.multiplicity);
  std::vector<CMatrix> out;
  for (std::size_t j = 0; j < z.size(); ++j) {
    std::vector<Jet> jets;
    for (std::size_t k = 0; k < z.size(); ++k) {
      Jet jet(counts[k], Complex(0));
      jet[0] = j == k ? 1.0 : 0.0;
      jets.push_back(std::move(jet));
    }
    out.push_back(polish_idempotent(hermite_interpolate(z.points(), jets, counts).evaluate(t)));
  }
  return out;
}

BlockDecomposition orthogonalize_projections(const CMatrix& t, const std::vector<Complex>& lambdas,
                                             const std::vector<CMatrix>& projections, double tolerance) {
  const auto start = Clock::now();
  const Eigen::Index d = t.rows();
  BlockDecomposition out;
  out.lambdas = lambdas;
  out.dixmier = dixmier_symmetrizer(build_group(projections));
  const CMatrix& x0 = out.dixmier.certificate.x;
  const CMatrix& x0_inv = out.dixmier.certificate.x_inv;

  CMatrix u(d, d);
  Eigen::Index col = 0;
  std::vector<CMatrix> images;
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const CMatrix q = x0 * projections[j] * x0_inv;
    images.push_back(q);
    const int r = static_cast<int>(std::lround(projections[j].trace().real()));
    if (r < 0 || col + r > d)
      throw Error(ErrorKind::PartitionViolation, "idempotent ranks do not add up to the dimension", double(col + r));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix((q + q.adjoint()) / 2.0));
    u.middleCols(col, r) = es.eigenvectors().rightCols(r);
    out.sizes.push_back(r);
    col += r;
  }
  if (col != d) throw Error(ErrorKind::PartitionViolation, "idempotent ranks do not add up to the dimension", double(col));
  u = linalg::polar_unitary(u);

  CMatrix x = u.adjoint() * x0;
  CMatrix x_inv = x0_inv * u;
  const CMatrix m = x * t * x_inv;
  Eigen::Index off = 0;
  for (const int s : out.sizes) {
    out.blocks.push_back(m.block(off, off, s, s));
    off += s;
  }
  out.off_block = linalg::off_block_norm(m, out.sizes);
  out.certificate = make_certificate("orthogonalize", std::move(x), std::move(x_inv), t,
                                     linalg::block_diagonal(out.blocks), tolerance);
  out.min_principal_angle = M_PI / 2;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      out.min_principal_angle = std::min(out.min_principal_angle, linalg::min_principal_angle(images[i], images[j]));
  out.certificate.seconds = seconds_since(start);
  return out;
}

BlockDecomposition diagonalize(const CMatrix& t, const ZeroSet& zeros, const std::vector<CMatrix>& projections,
                               double tolerance) {
  if (!zeros.is_simple()) throw Error(ErrorKind::InvalidArgument, "diagonalize needs simple zeros");
  BlockDecomposition out = orthogonalize_projections(t, zeros.points(), projections, tolerance);
  std::vector<CMatrix> diag;
  double defect = 0;
  for (std::size_t j = 0; j < out.blocks.size(); ++j) {
    const CMatrix lam = zeros.point(j) * identity(out.sizes[j]);
    defect = std::max(defect, linalg::spectral_norm(CMatrix(out.blocks[j] - lam)));
    diag.push_back(lam);
  }
  if (defect > 1e-6 * std::max(1.0, linalg::spectral_norm(t)))
    throw Error(ErrorKind::NotDiagonalizable, "eigenspace blocks are not scalar", defect);
  auto& c = out.certificate;
  c.stage = "diagonalize";
  c.target = linalg::block_diagonal(diag);
  c.residual = linalg::spectral_norm(CMatrix(c.x * t * c.x_inv - *c.target));
  return out;
}

BlockDecomposition diagonalize(const CMatrix& t, const ZeroSet& zeros, double tolerance) {
  if (!zeros.is_simple()) throw Error(ErrorKind::InvalidArgument, "diagonalize needs simple zeros");
  return diagonalize(t, zeros, spectral_idempotents(t, BlaschkeProduct(zeros)), tolerance);
}

BlockDecomposition orthogonalize_blocks(const CMatrix& t, const BlaschkeProduct& theta, double tolerance) {
  const ZeroSet& z = theta.zeros();
  const auto projections = spectral_idempotents(t, theta);

  std::vector<Jet> chi;
  for (const auto& e : z.entries()) {
    Jet jet(e.multiplicity, Complex(0));
    jet[0] = e.point.value();
    chi.push_back(std::move(jet));
  }
  const CMatrix w = hermite_calculus(t, theta, chi, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < z.size(); ++j) {
    CMatrix shifted = w;
    shifted.diagonal().array() -= z.point(j);
    const int kernel = static_cast<int>(t.rows()) - linalg::numerical_rank(shifted, 1e-8);
    if (kernel != z.multiplicity(j))
      throw Error(ErrorKind::MultiplicityMismatch,
                  "dim ker(W - l_" + std::to_string(j) + ") differs from the multiplicity", kernel);
  }
  BlockDecomposition out = orthogonalize_projections(t, z.points(), projections, tolerance);
  for (std::size_t j = 0; j < z.size(); ++j)
    if (out.sizes[j] != z.multiplicity(j))
      throw Error(ErrorKind::MultiplicityMismatch, "root subspace dimension differs from the multiplicity",
                  out.sizes[j]);
  return out;
}

NilpotentSimilarity nilpotent_similarity(const CMatrix& nm, int n) {
  const auto start = Clock::now();
  if (n < 1 || nm.rows() != n || nm.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "nilpotent_similarity needs an n x n matrix", n);
  const double norm = linalg::spectral_norm(nm);
  if (norm > 1 + 1e-10) throw Error(ErrorKind::NotContraction, "N is not a contraction", norm);
  std::vector<CMatrix> pw{identity(n)};
  for (int k = 1; k <= n; ++k) pw.push_back(nm * pw.back());
  const double top_norm = linalg::spectral_norm(pw[n]);
  if (top_norm > 1e-10) throw Error(ErrorKind::NotNilpotent, "N^n does not vanish", top_norm);

  Eigen::JacobiSVD<CMatrix> svd(pw[n - 1], Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  if (smax < 1e-8) throw Error(ErrorKind::NotCyclic, "N^{n-1} vanishes; N is not of full order", smax);
  CVector xi = svd.matrixV().col(0);
  Eigen::Index big = 0;
  xi.cwiseAbs().maxCoeff(&big);
  xi *= std::conj(xi(big)) / std::abs(xi(big)) / smax;

  const CVector y = pw[n - 1] * xi;
  std::vector<Complex> g(n);
  for (int j = 0; j < n; ++j) g[j] = y.dot(pw[j] * xi);
  std::vector<Complex> a(std::max(n - 1, 0));
  for (int k = n - 2; k >= 0; --k) {
    Complex acc = g[k];
    for (int r = 1; r <= n - 2 - k; ++r) acc -= a[n - 1 - r] * g[k + r];
    a[k] = acc;
  }
  CVector cyc = xi;
  for (int k = 0; k <= n - 2; ++k) cyc -= a[k] * (pw[n - 1 - k] * xi);

  CMatrix kry(n, n);
  kry.col(0) = cyc;
  for (int c = 1; c < n; ++c) kry.col(c) = nm * kry.col(c - 1);

  NilpotentSimilarity out;
  out.epsilon = n == 1 ? 1.0 : linalg::smallest_nonzero_singular_value(nm);
  out.cyclic = cyc;
  out.coefficients = a;
  out.certificate = make_certificate("nilpotent", kry.partialPivLu().inverse(), kry, nm, linalg::shift_matrix(n), 1e-9);
  out.certificate.predicted_bound = std::pow(out.epsilon, -2.0 * (n - 1));
  out.certificate.bound_formula = "eps^(-2(n-1))";
  out.certificate.seconds = seconds_since(start);
  return out;
}

JordanModelResult jordan_model_similarity(const CMatrix& t, const BlaschkeProduct& theta, const JordanOptions& opt) {
  const auto start = Clock::now();
  const ZeroSet& z = theta.zeros();
  JordanModelResult out;

  auto t0 = Clock::now();
  out.decomposition =
      staged("orthogonalize", [&] { return orthogonalize_blocks(t, theta, opt.residual_tolerance); });
  const double cond_r = out.decomposition.certificate.norm_x * out.decomposition.certificate.norm_x_inv;
  out.stages.push_back({"orthogonalize", out.decomposition.certificate.residual, cond_r, seconds_since(t0)});

  staged("cyclicity", [&] {
    const int r = cyclic_rank(t);
    if (r != t.rows()) throw Error(ErrorKind::NotCyclic, "T is not multiplicity-free", r);
    return 0;
  });

  std::vector<CMatrix> zs, zs_inv, models;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const std::string name = "block " + std::to_string(j);
    t0 = Clock::now();
    BlockCertificate bc = staged(name, [&] {
      BlockCertificate b;
      b.lambda = z.point(j);
      b.multiplicity = z.multiplicity(j);
      const int m = b.multiplicity;
      const CMatrix& a = out.decomposition.blocks[j];
      const BlaschkeProduct factor(ZeroSet({{z.entries()[j].point, 1}}));
      const BlaschkeProduct power(ZeroSet({{z.entries()[j].point, m}}));
      const CMatrix nil = hermite_calculus(a, power, FunctionSpec::blaschke(factor), opt.annihilation);
      b.scale = std::max(1.0, linalg::spectral_norm(nil));
      const NilpotentSimilarity ns = nilpotent_similarity(CMatrix(nil / b.scale), m);
      b.epsilon = ns.epsilon;
      const CrownReport crown = crown_equivalence_check(z.entries()[j].point, m);
      b.crown_distance = crown.distance;
      Eigen::VectorXcd d(m), d_inv(m);
      for (int k = 0; k < m; ++k) {
        d(k) = std::pow(b.scale, -k);
        d_inv(k) = std::pow(b.scale, k);
      }
      CMatrix x = crown.alignment * d.asDiagonal() * ns.certificate.x;
      CMatrix x_inv = ns.certificate.x_inv * d_inv.asDiagonal() * crown.alignment.adjoint();
      b.certificate = make_certificate(name, std::move(x), std::move(x_inv), a, crown.model, opt.residual_tolerance);
      return b;
    });
    bc.certificate.seconds = seconds_since(t0);
    out.stages.push_back({name, bc.certificate.residual, bc.certificate.norm_x * bc.certificate.norm_x_inv,
                          bc.certificate.seconds});
    out.sup_block_norm = std::max({out.sup_block_norm, bc.certificate.norm_x, bc.certificate.norm_x_inv});
    zs.push_back(bc.certificate.x);
    zs_inv.push_back(bc.certificate.x_inv);
    models.push_back(*bc.certificate.target);
    out.blocks.push_back(std::move(bc));
  }

  t0 = Clock::now();
  const CMatrix zb = linalg::block_diagonal(zs);
  const CMatrix zb_inv = linalg::block_diagonal(zs_inv);
  out.to_model = make_certificate("jordan_model", zb * out.decomposition.certificate.x,
                                  out.decomposition.certificate.x_inv * zb_inv, t, linalg::block_diagonal(models),
                                  opt.residual_tolerance);
  double rmax = 0;
  for (const auto& b : out.blocks) rmax = std::max(rmax, b.certificate.residual);
  out.composition_bound = rmax + linalg::condition_number(zb) * out.decomposition.certificate.residual;
  out.stages.push_back({"assemble", out.to_model.residual, out.to_model.norm_x * out.to_model.norm_x_inv,
                        seconds_since(t0)});

  if (opt.check_hypothesis) {
    t0 = Clock::now();
    try {
      out.model_sweep_margin = divisor_sweep(theta).margin;
      out.operator_sweep_margin = divisor_sweep(theta, t).margin;
      if (*out.model_sweep_margin < opt.hypothesis_floor)
        out.warnings.push_back("hypothesis-violated: divisor sweep margin " + short_number(*out.model_sweep_margin) +
                               " below floor " + short_number(opt.hypothesis_floor));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CombinatorialLimit) throw Error(e.kind(), e.what(), e.measured(), "hypothesis");
      out.warnings.push_back(std::string("hypothesis-unchecked: ") + e.what());
    }
    out.stages.push_back({"hypothesis", 0, 1, seconds_since(t0)});
  }

  if (opt.certify_compressed_shift) {
    t0 = Clock::now();
    JordanOptions inner = opt;
    inner.certify_compressed_shift = false;
    inner.check_hypothesis = false;
    const CMatrix s = jordan_block_matrix(theta).matrix;
    std::optional<JordanModelResult> run;
    try {
      run = jordan_model_similarity(s, theta, inner);
    } catch (const Error& e) {
      out.warnings.push_back("compressed-shift-uncertified: " + e.stage() + ": " + e.what());
      out.to_model.seconds = seconds_since(start);
      return out;
    }
    const JordanModelResult& model = *run;
    // X_S^-1 (J + E) X_S = S + X_S^-1 (E - E_S) X_S, so the composed residual is
    // only certified up to cond(X_S) (r + r_S).
    const CMatrix y = model.to_model.x_inv * out.to_model.x;
    CMatrix y_inv = out.to_model.x_inv * model.to_model.x;
    y_inv = (y_inv * (2 * identity(y.rows()) - y * y_inv)).eval();
    const double cond_s = model.to_model.norm_x * model.to_model.norm_x_inv;
    const double tol_s = std::max(opt.residual_tolerance,
                                  cond_s * (out.to_model.residual + model.to_model.residual) * (1 + tol::bound_slack));
    out.to_compressed_shift = make_certificate("compressed_shift", y, std::move(y_inv), t, s, tol_s);
    out.to_compressed_shift->seconds = seconds_since(t0);
    out.stages.push_back({"compressed_shift", out.to_compressed_shift->residual,
                          out.to_compressed_shift->norm_x * out.to_compressed_shift->norm_x_inv,
                          out.to_compressed_shift->seconds});
  }
  out.to_model.seconds = seconds_since(start);
  return out;
}

}  // namespace c0lab
