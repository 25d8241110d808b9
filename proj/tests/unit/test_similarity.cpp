#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "c0lab/diagnostics.hpp"
#include "c0lab/similarity.hpp"
#include "support.hpp"

using namespace c0lab;
using namespace c0lab::testing;

namespace {

CMatrix conjugate(const Conjugator& v, const CMatrix& a) { return v.v * a * v.v_inv; }

CMatrix residual(const SimilarityCertificate& c, const CMatrix& t, const CMatrix& target) {
  return c.x * t * c.x_inv - target;
}

/// Idempotents P_1 = [[1, a], [0, 0]] and I - P_1.
std::vector<CMatrix> skew_pair(Complex a) {
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1;
  p(0, 1) = a;
  return {p, eye(2) - p};
}

/// n skew idempotents: V diag(e_j e_j^T) V^-1.
std::vector<CMatrix> skew_partition(Rng& rng, int n, double condition) {
  const Conjugator v = random_conjugator(rng, n, condition, ConjugatorKind::Rotated);
  std::vector<CMatrix> out;
  for (int j = 0; j < n; ++j) {
    CMatrix e = CMatrix::Zero(n, n);
    e(j, j) = 1;
    out.push_back(conjugate(v, e));
  }
  return out;
}

CMatrix random_nilpotent(Rng& rng, int n) {
  CMatrix a = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = rng.complex_normal() * (i == j + 1 ? 1.0 : 0.3);
  for (int i = 1; i < n; ++i) a(i, i - 1) += 0.5 * a(i, i - 1) / std::abs(a(i, i - 1));
  const CMatrix u = random_unitary(rng, n);
  const CMatrix m = u * a * u.adjoint();
  return m / (linalg::spectral_norm(m) * rng.uniform(1.0, 1.5));
}

}  // namespace

TEST_SUITE("similarity") {
  TEST_CASE("certificate bookkeeping") {
    const CMatrix x = CMatrix::Identity(3, 3) * 2.0;
    const CMatrix t = linalg::shift_matrix(3);
    const SimilarityCertificate c = make_certificate("scale", x, x / 8.0, t, t, 1e-12);
    CHECK(c.norm_x == doctest::Approx(2.0));
    CHECK(c.norm_x_inv == doctest::Approx(0.25));
    CHECK(c.inverse_defect() == doctest::Approx(0.5));
    CHECK_FALSE(c.valid());

    const SimilarityCertificate d = make_certificate("scale", x, x / 4.0, t, t * 2.0, 1e-12);
    CHECK(d.inverse_ok());
    CHECK(d.residual == doctest::Approx(1.0));
    CHECK_FALSE(d.residual_ok());
    CHECK(d.inverse_tolerance() == tol::inverse_check);

    CMatrix w = CMatrix::Identity(2, 2);
    w(0, 0) = 1e4;
    w(1, 1) = 1e-4;
    const SimilarityCertificate e = make_certificate("wide", w, w.inverse(), eye(2), eye(2), 1e-12);
    CHECK(e.inverse_tolerance() == doctest::Approx(16 * 0x1.0p-52 * 1e8));
  }

  TEST_CASE("group law") {
    Rng rng(41);
    const auto p = skew_partition(rng, 3, 10);
    const GroupRep g = build_group(p);
    CHECK(g.order() == 8);
    CHECK_FALSE(g.lazy());
    CHECK(norm(g.element(0) + eye(3)) <= 1e-12);
    CHECK(norm(g.element(7) - eye(3)) <= 1e-12);
    for (std::uint32_t a = 0; a < 8; ++a) {
      CHECK(norm(g.element(a) * g.element(a) - eye(3)) <= 1e-9);
      for (std::uint32_t b = 0; b < 8; ++b)
        CHECK(norm(g.element(a) * g.element(b) - g.element(group_product_mask(a, b, 7))) <= 1e-9);
    }
    CHECK(group_law_residual(g) <= 1e-9);
  }

  TEST_CASE("partition violations") {
    std::vector<CMatrix> bad = skew_pair(0.5);
    bad[1] *= 1.1;
    try {
      build_group(bad);
      FAIL("expected partition violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PartitionViolation);
      CHECK(e.measured() > 1e-8);
    }
  }

  TEST_CASE("lazy groups agree with the generators") {
    std::vector<CMatrix> p;
    for (int j = 0; j < 11; ++j) {
      CMatrix e = CMatrix::Zero(11, 11);
      e(j, j) = 1;
      p.push_back(e);
    }
    const GroupRep g = build_group(p);
    CHECK(g.lazy());
    const CMatrix e = g.element(0b101);
    CHECK(e(0, 0) == Complex(1));
    CHECK(e(1, 1) == Complex(-1));
    CHECK(e(2, 2) == Complex(1));
  }

  TEST_CASE("dixmier symmetrizer on a skew pair") {
    const Complex a(2.0, -1.0);
    const auto p = skew_pair(a);
    const DixmierResult r = dixmier_symmetrizer(build_group(p));
    // The average over the group collapses to sum_j P_j* P_j.
    CMatrix avg = CMatrix::Zero(2, 2);
    for (const auto& q : p) avg += q.adjoint() * q;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(avg);
    const CMatrix root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    CHECK(norm(r.certificate.x - root) <= 1e-12);
    CHECK(r.max_unitarity_residual <= 1e-12);
    CHECK(r.max_selfadjoint_residual <= 1e-12);
    CHECK(r.min_average_eigenvalue == doctest::Approx(es.eigenvalues()(0)));
  }

  TEST_CASE("dixmier symmetrizer on random partitions") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = rng.uniform_int(2, 8);
      const auto p = skew_partition(rng, n, rng.uniform(1, 50));
      const DixmierResult r = dixmier_symmetrizer(build_group(p));
      CHECK(r.max_unitarity_residual <= 1e-9);
      CHECK(r.max_selfadjoint_residual <= 1e-8);
      CHECK(r.certificate.inverse_ok());
      for (const auto& q : p) {
        const CMatrix s = r.certificate.x * q * r.certificate.x_inv;
        CHECK(norm(s - s.adjoint()) <= 1e-8);
      }
    }
  }

  TEST_CASE("spectral idempotents") {
    const ZeroSet z({{DiskPoint(0.3), 2}, {DiskPoint(-0.5), 1}, {DiskPoint(Complex(0, 0.6)), 2}});
    const BlaschkeProduct theta(z);
    Rng rng(45);
    const CMatrix t = conjugate(random_conjugator(rng, 5, 10), jordan_model(theta));
    const auto p = spectral_idempotents(t, theta);
    REQUIRE(p.size() == 3);
    CMatrix sum = CMatrix::Zero(5, 5);
    for (std::size_t j = 0; j < p.size(); ++j) {
      sum += p[j];
      CHECK(norm(p[j] * p[j] - p[j]) <= 1e-9);
      CHECK(norm(p[j] * t - t * p[j]) <= 1e-9);
      CHECK(linalg::numerical_rank(p[j]) == z.multiplicity(j));
    }
    CHECK(norm(sum - eye(5)) <= 1e-9);
  }

  TEST_CASE("diagonalize") {
    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
      const ZeroSet z = spread_zeros(rng, rng.uniform_int(1, 6), 0.85, 0.05);
      const int n = static_cast<int>(z.size());
      CVector l(n);
      for (int j = 0; j < n; ++j) l(j) = z.point(j);
      const CMatrix t = conjugate(random_conjugator(rng, n, 20), CMatrix(l.asDiagonal()));
      const BlockDecomposition d = diagonalize(t, z);
      REQUIRE(d.lambdas.size() == std::size_t(n));
      CVector got(n);
      for (int j = 0; j < n; ++j) got(j) = d.lambdas[j];
      CHECK(norm(residual(d.certificate, t, CMatrix(got.asDiagonal()))) <= 1e-8);
      CHECK(d.certificate.valid());
    }
  }

  TEST_CASE("orthogonalize blocks") {
    const BlaschkeProduct theta(ZeroSet({{DiskPoint(0.3), 2}, {DiskPoint(-0.5), 1}}));
    Rng rng(49);
    const CMatrix t = conjugate(random_conjugator(rng, 3, 10), jordan_model(theta));
    const BlockDecomposition d = orthogonalize_blocks(t, theta);
    CHECK(d.sizes == std::vector<int>{2, 1});
    CHECK(d.off_block <= 1e-9);
    CHECK(d.certificate.valid());
    const CMatrix tt = d.certificate.x * t * d.certificate.x_inv;
    CHECK(linalg::off_block_norm(tt, d.sizes) <= 1e-9);
    CHECK(std::abs(tt(2, 2) - (-0.5)) <= 1e-9);
    CHECK(std::abs(tt.topLeftCorner(2, 2).trace() - 0.6) <= 1e-9);

    const BlaschkeProduct wrong(ZeroSet({{DiskPoint(0.3), 1}, {DiskPoint(-0.5), 2}}));
    CHECK_THROWS_AS(orthogonalize_blocks(t, wrong), Error);
  }

  TEST_CASE("nilpotent similarity examples") {
    for (const double c : {1.0, 0.5, 0.1}) {
      const CMatrix n = c * linalg::shift_matrix(2);
      const NilpotentSimilarity r = nilpotent_similarity(n, 2);
      CHECK(r.epsilon == doctest::Approx(c));
      CHECK(r.certificate.norm_x_inv == doctest::Approx(1.0 / c));
      CHECK(r.certificate.norm_x <= 1 + 1e-12);
      CHECK(r.certificate.valid());
    }
    CHECK_THROWS_AS(nilpotent_similarity(2.0 * linalg::shift_matrix(3), 3), Error);
    CHECK_THROWS_AS(nilpotent_similarity(eye(2) * 0.5, 2), Error);
    CMatrix split = CMatrix::Zero(3, 3);
    split(1, 0) = 1;
    CHECK_THROWS_AS(nilpotent_similarity(split, 3), Error);
  }

  TEST_CASE("nilpotent similarity on random contractions") {
    Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = rng.uniform_int(2, 8);
      const CMatrix nm = random_nilpotent(rng, n);
      const NilpotentSimilarity r = nilpotent_similarity(nm, n);
      CHECK(norm(residual(r.certificate, nm, linalg::shift_matrix(n))) <= 1e-9);
      CHECK(r.certificate.norm_x <= 1 + 1e-9);
      CHECK(r.certificate.bound_ok());
      CVector v = r.cyclic;
      for (int k = 0; k < n; ++k, v = nm * v) {
        CVector ek = CVector::Zero(n);
        ek(k) = 1;
        CHECK((r.certificate.x * v - ek).norm() <= 1e-9);
      }
    }
  }

  TEST_CASE("jordan model round trip") {
    const BlaschkeProduct theta(
        ZeroSet({{DiskPoint(0.3), 2}, {DiskPoint(-0.5), 1}, {DiskPoint(Complex(0, 0.7)), 1}}));
    const CMatrix j = jordan_model(theta);
    const CMatrix s = jordan_block_matrix(theta).matrix;
    Rng rng(53);
    for (const double cond : {1.0, 10.0, 100.0}) {
      const CMatrix t = conjugate(random_conjugator(rng, 4, cond), j);
      const JordanModelResult r = jordan_model_similarity(t, theta);
      CHECK(r.to_model.valid());
      CHECK(norm(residual(r.to_model, t, j)) <= 1e-8);
      REQUIRE(r.blocks.size() == 3);
      CHECK(r.blocks[0].multiplicity == 2);
      for (const auto& b : r.blocks) CHECK(b.certificate.valid());
      REQUIRE(r.to_compressed_shift);
      CHECK(r.to_compressed_shift->valid());
      CHECK(norm(residual(*r.to_compressed_shift, t, s)) <= r.to_compressed_shift->tolerance);
      CHECK(r.composition_bound >= 0);
      CHECK_FALSE(r.stages.empty());
    }
  }

  TEST_CASE("jordan model agrees with diagonalize for simple zeros") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
      const ZeroSet z = spread_zeros(rng, rng.uniform_int(2, 6), 0.8, 0.05);
      const BlaschkeProduct theta(z);
      const int n = static_cast<int>(z.size());
      const CMatrix t = conjugate(random_conjugator(rng, n, 10), jordan_model(theta));
      const JordanModelResult r = jordan_model_similarity(t, theta);
      const BlockDecomposition d = diagonalize(t, z);
      const CMatrix a = r.to_model.x * t * r.to_model.x_inv;
      const CMatrix b = d.certificate.x * t * d.certificate.x_inv;
      CHECK(norm(a - CMatrix(a.diagonal().asDiagonal())) <= 1e-8);
      CHECK(norm(CMatrix(a.diagonal().asDiagonal()) - CMatrix(b.diagonal().asDiagonal())) <= 1e-8);
    }
  }

  TEST_CASE("certificates compose") {
    const BlaschkeProduct theta(ZeroSet({{DiskPoint(0.2), 2}, {DiskPoint(-0.4), 2}}));
    Rng rng(57);
    const CMatrix j = jordan_model(theta);
    const Conjugator v = random_conjugator(rng, 4, 30);
    const CMatrix t = conjugate(v, j);
    const JordanModelResult r = jordan_model_similarity(t, theta);
    // Any two maps onto the same model differ by something commuting with it.
    const CMatrix w = r.to_model.x * v.v;
    CHECK(norm(w * j - j * w) <= 1e-7 * linalg::spectral_norm(w));
    CHECK(norm(r.to_model.x * r.to_model.x_inv - eye(4)) <= 1e-10);
  }

  TEST_CASE("closed range survives similarity") {
    Rng rng(59);
    for (int trial = 0; trial < 10; ++trial) {
      const ZeroSet z = with_multiplicities(spread_zeros(rng, 3, 0.8, 0.05), {1, 2});
      const BlaschkeProduct theta(z);
      const Conjugator v = random_conjugator(rng, z.degree(), 10);
      const CMatrix t = conjugate(v, jordan_model(theta));
      const double cond = linalg::spectral_norm(v.v) * linalg::spectral_norm(v.v_inv);
      const double model = divisor_sweep(theta).margin;
      const double op = divisor_sweep(theta, t).margin;
      CHECK(op >= model / cond * (1 - 1e-8));
      CHECK(op <= model * cond * (1 + 1e-8));
    }
  }
}
