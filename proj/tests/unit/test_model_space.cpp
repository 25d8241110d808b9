#include <doctest.h>

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "c0lab/model_space.hpp"
#include "support.hpp"

using namespace c0lab;
using namespace c0lab::testing;

namespace {

constexpr int grid = 4096;

// Mean of left(z) right(z)^* over the circle by the trapezoid rule, exact for
// the rational integrands here up to aliasing of order |l|^grid.
template <typename F>
CMatrix circle_mean(int n, const F& column_at) {
  CMatrix g = CMatrix::Zero(n, n);
  for (int k = 0; k < grid; ++k) {
    const Complex z = std::polar(1.0, 2 * M_PI * k / grid);
    const auto [left, right] = column_at(z);
    g += left * right.adjoint();
  }
  return g / double(grid);
}

std::vector<Complex> convolve(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> c(a.size() + b.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<Complex> sorted(CVector v) {
  std::vector<Complex> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

BlaschkeProduct random_theta(Rng& rng, int entries, int max_mult, double radius) {
  std::vector<ZeroEntry> e;
  for (const Complex p : random_points(rng, entries, radius)) e.push_back({DiskPoint(p), rng.uniform_int(1, max_mult)});
  return BlaschkeProduct(ZeroSet(std::move(e)));
}

}  // namespace

TEST_SUITE("model_space") {
  TEST_CASE("small bases") {
    const ModelBasis b0 = model_basis(BlaschkeProduct(ZeroSet::simple({0.0})));
    CHECK(b0.dim() == 1);
    CHECK(std::abs(b0.evaluate(Complex(0.3, 0.1))(0) - 1.0) < 1e-15);

    const ModelBasis b2 = model_basis(BlaschkeProduct(ZeroSet({{DiskPoint(0.0), 2}})));
    CHECK(b2.dim() == 2);
    const Complex z(0.2, -0.7);
    CHECK(std::abs(b2.evaluate(z)(0) - 1.0) < 1e-15);
    CHECK(std::abs(b2.evaluate(z)(1) - z) < 1e-15);
  }

  TEST_CASE("basis is orthonormal under boundary quadrature") {
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
      const BlaschkeProduct theta = random_theta(rng, 3, 2, 0.8);
      const ModelBasis basis(theta);
      const CMatrix g = circle_mean(basis.dim(), [&](Complex z) {
        const CVector e = basis.evaluate(z);
        return std::pair{e, e};
      });
      CHECK(norm(g - eye(basis.dim())) <= 1e-10);
    }
  }

  TEST_CASE("compressed shift matches quadrature of <z e_j, e_i>") {
    Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
      const BlaschkeProduct theta = random_theta(rng, 3, 2, 0.8);
      const ModelBasis basis(theta);
      const CMatrix s = jordan_block_matrix(theta).matrix;
      const CMatrix oracle = circle_mean(basis.dim(), [&](Complex z) {
        const CVector e = basis.evaluate(z);
        return std::pair<CVector, CVector>{z * e, e};
      }).transpose();
      CHECK(norm(s - oracle) <= 1e-10);
    }
  }

  TEST_CASE("jordan block examples") {
    const Complex l(0.3, 0.4);
    const CMatrix s1 = jordan_block_matrix(BlaschkeProduct(ZeroSet::simple({l}))).matrix;
    REQUIRE(s1.rows() == 1);
    CHECK(std::abs(s1(0, 0) - l) < 1e-15);

    for (int n = 1; n <= 6; ++n) {
      const CMatrix s = jordan_block_matrix(BlaschkeProduct(ZeroSet({{DiskPoint(0.0), n}}))).matrix;
      CHECK(norm(s - linalg::shift_matrix(n)) == 0.0);
    }

    const CMatrix s2 = jordan_block_matrix(BlaschkeProduct(ZeroSet::simple({0.3, -0.4}))).matrix;
    const auto ev = sorted(Eigen::ComplexEigenSolver<CMatrix>(s2).eigenvalues());
    CHECK(std::abs(ev[0] - (-0.4)) < 1e-14);
    CHECK(std::abs(ev[1] - 0.3) < 1e-14);
  }

  TEST_CASE("compressed shift invariants up to degree 16") {
    Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
      const BlaschkeProduct theta = random_theta(rng, rng.uniform_int(1, 8), 2, 0.9);
      const CMatrix s = jordan_block_matrix(theta).matrix;
      CHECK(linalg::singular_values(s)(0) <= 1 + 1e-10);
      CHECK(norm(hermite_calculus(s, theta, FunctionSpec::blaschke(theta))) <= 1e-9);
      CHECK(norm(theta.evaluate(s)) <= 1e-9);
      CHECK(is_multiplicity_free(s));
    }
  }

  TEST_CASE("kernel of S - l_j is one-dimensional for simple zeros") {
    Rng rng(8);
    const ZeroSet z = spread_zeros(rng, 5, 0.8, 0.05);
    const CMatrix s = jordan_block_matrix(BlaschkeProduct(z)).matrix;
    for (std::size_t j = 0; j < z.size(); ++j) {
      CMatrix shifted = s;
      shifted.diagonal().array() -= z.point(j);
      CHECK(s.rows() - linalg::numerical_rank(shifted) == 1);
    }
  }

  TEST_CASE("calculus basics") {
    Rng rng(10);
    const BlaschkeProduct theta = random_theta(rng, 4, 3, 0.8);
    const CMatrix s = jordan_block_matrix(theta).matrix;
    CHECK(norm(hermite_calculus(s, theta, FunctionSpec::constant(1.0)) - eye(s.rows())) <= 1e-12);
    CHECK(norm(hermite_calculus(s, theta, FunctionSpec::polynomial({0.0, 1.0})) - s) <= 1e-12);

    const CMatrix junk = random_gaussian(rng, int(s.rows()), int(s.rows()));
    try {
      hermite_calculus(junk, theta, FunctionSpec::constant(1.0));
      FAIL("expected annihilation failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AnnihilationFailed);
      CHECK(e.measured() > 1e-8);
    }
  }

  TEST_CASE("calculus matches eigendecomposition for distinct zeros") {
    const Complex l1(0.3, 0.2), l2(-0.5, 0.1);
    const BlaschkeProduct theta(ZeroSet::simple({l1, l2}));
    const CMatrix s = jordan_block_matrix(theta).matrix;
    const FunctionSpec u = FunctionSpec::blaschke(BlaschkeProduct(ZeroSet::simple({l1})));
    Eigen::ComplexEigenSolver<CMatrix> es(s);
    CVector fv(2);
    for (int i = 0; i < 2; ++i) fv(i) = u.value(es.eigenvalues()(i));
    const CMatrix oracle = es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().inverse();
    CHECK(norm(hermite_calculus(s, theta, u) - oracle) <= 1e-12);
  }

  TEST_CASE("calculus is multiplicative") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const BlaschkeProduct theta = random_theta(rng, 3, 3, 0.8);
      const CMatrix s = jordan_block_matrix(theta).matrix;
      std::vector<Complex> p, q;
      for (int k = 0, n = rng.uniform_int(1, 6); k < n; ++k) p.push_back(rng.complex_normal());
      for (int k = 0, n = rng.uniform_int(1, 6); k < n; ++k) q.push_back(rng.complex_normal());
      const CMatrix up = hermite_calculus(s, theta, FunctionSpec::polynomial(p));
      const CMatrix uq = hermite_calculus(s, theta, FunctionSpec::polynomial(q));
      const CMatrix upq = hermite_calculus(s, theta, FunctionSpec::polynomial(convolve(p, q)));
      CHECK(norm(upq - up * uq) <= 1e-9 * std::max(1.0, norm(upq)));
    }
  }

  TEST_CASE("spectrum maps under the calculus") {
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
      const ZeroSet z = spread_zeros(rng, 4, 0.8, 0.05);
      const BlaschkeProduct theta(z);
      const CMatrix s = jordan_block_matrix(theta).matrix;
      std::vector<Complex> p;
      for (int k = 0; k < 4; ++k) p.push_back(rng.complex_normal());
      const FunctionSpec u = FunctionSpec::polynomial(p);
      CVector expect(z.size());
      for (std::size_t j = 0; j < z.size(); ++j) expect(j) = u.value(z.point(j));
      const auto got = sorted(Eigen::ComplexEigenSolver<CMatrix>(hermite_calculus(s, theta, u)).eigenvalues());
      const auto want = sorted(expect);
      for (std::size_t j = 0; j < want.size(); ++j) CHECK(std::abs(got[j] - want[j]) <= 1e-9);
    }
  }

  TEST_CASE("calculus does not depend on the zero order") {
    Rng rng(16);
    const Complex a(0.2, 0.5), b(-0.6, 0.1), c(0.1, -0.3);
    const BlaschkeProduct t1(ZeroSet({{DiskPoint(a), 2}, {DiskPoint(b), 1}, {DiskPoint(c), 2}}));
    const BlaschkeProduct t2(ZeroSet({{DiskPoint(c), 2}, {DiskPoint(a), 2}, {DiskPoint(b), 1}}));
    const CMatrix s = jordan_block_matrix(t1).matrix;
    const FunctionSpec u = FunctionSpec::rational({1.0, 0.5}, {2.0, Complex(0, 0.3)});
    CHECK(norm(hermite_calculus(s, t1, u) - hermite_calculus(s, t2, u)) <= 1e-10);
  }

  TEST_CASE("rational functions must be analytic on the closed disk") {
    CHECK_THROWS_AS(FunctionSpec::rational({1.0}, {0.5, -1.0}), Error);
    CHECK_NOTHROW(FunctionSpec::rational({1.0}, {2.0, -1.0}));
  }

  TEST_CASE("inner divisors") {
    const DiskPoint l(0.4);
    CHECK(inner_divisors(BlaschkeProduct(ZeroSet({{l, 1}}))).size() == 2);
    CHECK(inner_divisors(BlaschkeProduct(ZeroSet({{l, 2}}))).size() == 3);
    const auto d = inner_divisors(BlaschkeProduct(ZeroSet::simple({0.1, 0.2, 0.3})));
    CHECK(d.size() == 8);
    CHECK(d.front().product.degree() == 0);
    CHECK(d.back().product.degree() == 3);

    std::vector<Complex> many;
    for (int j = 0; j < 17; ++j) many.push_back(std::polar(0.5, 0.3 * j));
    try {
      inner_divisors(BlaschkeProduct(ZeroSet::simple(many)));
      FAIL("expected combinatorial limit");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CombinatorialLimit);
    }
  }

  TEST_CASE("partial isometries") {
    CHECK(partial_isometry_defect(CMatrix::Zero(3, 3)) == 0.0);
    CHECK(partial_isometry_defect(eye(4)) == 0.0);
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 0.5;
    CHECK(partial_isometry_defect(a) > 0.3);

    Rng rng(18);
    for (int trial = 0; trial < 5; ++trial) {
      const BlaschkeProduct theta(random_zeros(rng, rng.uniform_int(1, 8), 0.9));
      const CMatrix s = jordan_block_matrix(theta).matrix;
      for (const auto& d : inner_divisors(theta))
        CHECK(partial_isometry_defect(hermite_calculus(s, theta, FunctionSpec::blaschke(d.product))) <= 1e-8);
    }
  }

  TEST_CASE("crown equivalence") {
    for (int m = 1; m <= 4; ++m) CHECK(crown_equivalence_check(DiskPoint(0.0), m).distance == 0.0);
    CHECK(crown_equivalence_check(DiskPoint(0.5), 2).distance <= 1e-9);
    CHECK(crown_equivalence_check(DiskPoint(0.7), 3).involution_residual <= 1e-12);
    const CrownReport r = crown_equivalence_check(DiskPoint(Complex(-0.3, 0.6)), 5);
    CHECK(r.distance <= 1e-9);
    CHECK(norm(r.alignment.adjoint() * r.alignment - eye(5)) <= 1e-12);
  }

  TEST_CASE("jordan model is the direct sum of single-zero blocks") {
    const ZeroSet z({{DiskPoint(0.3), 2}, {DiskPoint(-0.5), 1}, {DiskPoint(Complex(0, 0.7)), 3}});
    const CMatrix j = jordan_model(BlaschkeProduct(z));
    REQUIRE(j.rows() == 6);
    CHECK(linalg::off_block_norm(j, {2, 1, 3}) == 0.0);
    const CMatrix last = jordan_block_matrix(BlaschkeProduct(ZeroSet({{DiskPoint(Complex(0, 0.7)), 3}}))).matrix;
    CHECK(norm(j.bottomRightCorner(3, 3) - last) == 0.0);
  }
}
