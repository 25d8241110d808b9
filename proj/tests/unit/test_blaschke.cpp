#include <doctest.h>

#include <cmath>

#include "c0lab/blaschke.hpp"
#include "c0lab/model_space.hpp"
#include "support.hpp"

using namespace c0lab;
using namespace c0lab::testing;

namespace {

// |x - y| / |1 - conj(x) y|, written out independently of blaschke_factor.
double rho(Complex x, Complex y) { return std::abs(x - y) / std::abs(1.0 - std::conj(x) * y); }

}  // namespace

TEST_SUITE("blaschke") {
  TEST_CASE("factor convention") {
    CHECK(blaschke_factor(Complex(0), Complex(0.3)) == Complex(0.3));
    CHECK(std::abs(blaschke_factor(Complex(0.5), Complex(0.5))) == 0.0);
    CHECK(std::abs(blaschke_factor(Complex(0.5), Complex(0.0)) - 0.5) < 1e-15);
    const Complex l(0.3, -0.6);
    CHECK(std::abs(blaschke_factor(l, Complex(0)) - std::abs(l)) < 1e-15);
  }

  TEST_CASE("disk points are strictly interior") {
    CHECK_THROWS_AS(DiskPoint(1.0), Error);
    CHECK_THROWS_AS(DiskPoint(Complex(0.6, 0.8)), Error);
    CHECK_NOTHROW(DiskPoint(0.999999));
  }

  TEST_CASE("zero sets reject repeats and empty input") {
    CHECK_THROWS_AS(ZeroSet::simple({0.1, 0.1}), Error);
    CHECK_THROWS_AS(ZeroSet(std::vector<ZeroEntry>{}), Error);
    CHECK_THROWS_AS(ZeroSet({{DiskPoint(0.1), 0}}), Error);
    const ZeroSet z({{DiskPoint(0.1), 2}, {DiskPoint(-0.3), 3}});
    CHECK(z.degree() == 5);
    CHECK(z.max_multiplicity() == 3);
    CHECK(z.expanded().size() == 5);
    CHECK_THROWS_AS(z.concat(ZeroSet::simple({-0.3})), Error);
  }

  TEST_CASE("pseudo-distance") {
    CHECK(pseudo_distance(DiskPoint(0.7), DiskPoint(0.7)) == 0.0);
    CHECK(std::abs(pseudo_distance(DiskPoint(0.0), DiskPoint(0.5)) - 0.5) < 1e-15);
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
      const Complex x = rng.disk_point(0.99), y = rng.disk_point(0.99);
      CHECK(std::abs(pseudo_distance(x, y) - pseudo_distance(y, x)) <= 1e-14);
      CHECK(std::abs(pseudo_distance(x, y) - rho(x, y)) <= 1e-13);
    }
  }

  TEST_CASE("evaluation and partial products") {
    const BlaschkeProduct b0(ZeroSet::simple({0.0}));
    CHECK(std::abs(b0.evaluate(Complex(0.4)) - 0.4) < 1e-15);

    const BlaschkeProduct b(ZeroSet::simple({0.3, 0.6}));
    const Complex z(0, 0.9);
    CHECK(b.partial_evaluate(0, z) == Complex(1));
    CHECK(std::abs(b.partial_evaluate(1, z) - blaschke_factor(Complex(0.3), z)) < 1e-15);
    const Complex direct = blaschke_factor(Complex(0.3), z) * blaschke_factor(Complex(0.6), z);
    CHECK(std::abs(b.evaluate(z) - direct) < 1e-15);
    CHECK(b.partial_evaluate(b.degree(), z) == b.evaluate(z));

    const Complex u = std::polar(1.0, 0.7);
    const BlaschkeProduct bu(ZeroSet::simple({0.3, 0.6}), u);
    CHECK(std::abs(bu.evaluate(z) - u * direct) < 1e-15);
  }

  TEST_CASE("multiplicities repeat factors in place") {
    const BlaschkeProduct b(ZeroSet({{DiskPoint(0.2), 2}, {DiskPoint(Complex(0, -0.5)), 1}}));
    const Complex z(0.1, 0.4);
    const Complex f = blaschke_factor(Complex(0.2), z);
    CHECK(std::abs(b.partial_evaluate(2, z) - f * f) < 1e-15);
    CHECK(std::abs(b.evaluate(z) - f * f * blaschke_factor(Complex(0, -0.5), z)) < 1e-15);
  }

  TEST_CASE("modulus bounds") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const BlaschkeProduct b(random_zeros(rng, rng.uniform_int(1, 10), 0.95));
      for (int i = 0; i < 100; ++i) CHECK(std::abs(b.evaluate(rng.disk_point(0.999))) < 1.0);
      for (int i = 0; i < 10; ++i)
        CHECK(std::abs(std::abs(b.evaluate(std::polar(1.0, rng.uniform(0, 2 * M_PI)))) - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("multiplicativity under concatenation") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const ZeroSet a = random_zeros(rng, rng.uniform_int(1, 5));
      const ZeroSet c = random_zeros(rng, rng.uniform_int(1, 5));
      const BlaschkeProduct ab(a.concat(c));
      const Complex z = rng.disk_point(0.95);
      const Complex prod = BlaschkeProduct(a).evaluate(z) * BlaschkeProduct(c).evaluate(z);
      CHECK(std::abs(ab.evaluate(z) - prod) <= 1e-13 * std::max(std::abs(prod), 1e-300));
    }
  }

  TEST_CASE("carleson constant") {
    CHECK(carleson_constant(ZeroSet::simple({0.4})) == 1.0);
    CHECK(std::abs(carleson_constant(ZeroSet::simple({0.0, 0.5})) - 0.5) < 1e-15);
    CHECK_THROWS_AS(carleson_constant(ZeroSet({{DiskPoint(0.1), 2}})), Error);

    std::vector<Complex> l;
    for (int j = 1; j <= 8; ++j) l.emplace_back(1.0 - std::ldexp(1.0, -j), 0.0);
    double oracle = 1;
    for (std::size_t k = 0; k < l.size(); ++k) {
      double p = 1;
      for (std::size_t j = 0; j < l.size(); ++j)
        if (j != k) p *= rho(l[j], l[k]);
      oracle = std::min(oracle, p);
    }
    CHECK(std::abs(carleson_constant(ZeroSet::simple(l)) - oracle) <= 1e-14);
  }

  TEST_CASE("derivatives") {
    const BlaschkeProduct b0(ZeroSet::simple({0.0}));
    CHECK(std::abs(b0.derivative(Complex(0.3, 0.2), 1) - 1.0) < 1e-15);

    const BlaschkeProduct b(ZeroSet::simple({0.3, 0.5}));
    const Complex z(0.1, -0.2);
    CHECK(b.derivative(z, 0) == b.evaluate(z));
    const double h = 1e-5;
    const Complex fd = (b.evaluate(Complex(h)) - b.evaluate(Complex(-h))) / (2 * h);
    CHECK(std::abs(b.derivative(Complex(0), 1) - fd) <= 1e-6 * std::abs(fd));
    CHECK_THROWS_AS(b.derivative(z, 13), Error);

    // Jet coefficients are derivatives over factorials.
    const BlaschkeProduct c(ZeroSet({{DiskPoint(Complex(0.2, 0.3)), 2}, {DiskPoint(-0.4), 1}}));
    const Jet jet = c.jet(z, 5);
    double fact = 1;
    for (int p = 0; p <= 5; ++p) {
      if (p > 0) fact *= p;
      CHECK(std::abs(jet[p] - c.derivative(z, p) / fact) <= 1e-12 * std::max(1.0, std::abs(jet[p])));
    }
  }

  TEST_CASE("monotone divisor bound") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      const ZeroSet z = random_zeros(rng, rng.uniform_int(2, 8), 0.9);
      const BlaschkeProduct theta(z);
      const auto divisors = inner_divisors(theta);
      for (std::size_t j = 0; j < z.size(); ++j) {
        double cofactor = 1;
        for (std::size_t i = 0; i < z.size(); ++i)
          if (i != j) cofactor *= pseudo_distance(z.point(i), z.point(j));
        for (const auto& d : divisors) {
          const double v = std::abs(d.product.evaluate(z.point(j)));
          if (v > tol::zero_value) CHECK(v >= cofactor * (1 - 1e-12));
        }
      }
    }
  }

  TEST_CASE("sequence generators") {
    const ZeroSet e = generate({SequenceKind::Exponential, 8, 0.5, 0, {}});
    REQUIRE(e.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(e.point(j) == Complex(1.0 - std::ldexp(1.0, -(j + 1)), 0.0));

    const ZeroSet c = generate({SequenceKind::ClusteredPairs, 6, 1e-3, 0, {}});
    REQUIRE(c.size() == 6);
    for (int p = 0; p < 3; ++p) CHECK(std::abs(c.point(2 * p + 1) - c.point(2 * p) - 1e-3) < 1e-15);

    const SequenceSpec h{SequenceKind::UniformHyperbolic, 20, 0.8, 42, {1, 2}};
    const ZeroSet u1 = generate(h), u2 = generate(h);
    for (std::size_t j = 0; j < u1.size(); ++j) {
      CHECK(u1.point(j) == u2.point(j));
      CHECK(std::abs(u1.point(j)) <= 0.8);
      CHECK(u1.multiplicity(j) == (j % 2 ? 2 : 1));
    }
    CHECK_THROWS_AS(generate({SequenceKind::Exponential, 4, 1.5, 0, {}}), Error);
    CHECK_THROWS_AS(generate({SequenceKind::Exponential, 0, 0.5, 0, {}}), Error);
  }
}
