#include <doctest.h>

#include <random>

#include "nmzi/elements.hpp"
#include "nmzi/error.hpp"
#include "nmzi/field.hpp"
#include "oracles.hpp"

using namespace nmzi;

namespace {

const GaussianSpec kBeam{};
const TransverseGrid kGrid{1024, 16e-3};

TransverseField gaussian() { return make_gaussian(kBeam, kGrid); }

TransverseField from_function(const std::function<cplx(double)>& g) {
  std::vector<cplx> a(kGrid.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = g(kGrid.x(i));
  return {kGrid, kBeam.wavenumber(), std::move(a)};
}

double distance(const TransverseField& f, const TransverseField& g) { return (f - g).norm(); }

TransverseField random_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  return from_function([&](double) { return cplx{n(rng), n(rng)}; });
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TransverseGrid(1000, 1e-2), ConfigError);
  CHECK_THROWS_AS(TransverseGrid(128, 1e-2), ConfigError);
  CHECK_THROWS_AS(TransverseGrid(256, 0.0), ConfigError);
  CHECK(kGrid.spacing() == doctest::Approx(32e-3 / 1024));
  CHECK(kGrid.x(kGrid.center_index()) == 0.0);
  CHECK(kGrid.x(0) == doctest::Approx(-16e-3));
}

TEST_CASE("gaussian preparation") {
  const auto g = gaussian();
  CHECK(std::abs(centroid(g)) < 1e-15 * kBeam.waist);
  CHECK(std::abs(g.norm() - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(inner_product(g, parity_x(g))) - 1.0) < 1e-12);
  CHECK(satisfies_edge_guard(g));

  try {
    make_gaussian(kBeam, TransverseGrid(1024, 7e-3));
    FAIL("narrow grid accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == "grid-too-narrow");
  }
  GaussianSpec bad{1e-5, 1e-6};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("centroid") {
  const double w0 = kBeam.waist;
  SUBCASE("translation") {
    const double d = 10e-6;
    const auto f = from_function([&](double x) { return std::exp(-(x - d) * (x - d) / (w0 * w0)); });
    CHECK(std::abs(centroid(f) - d) < 1e-3 * d);
  }
  SUBCASE("linear ramp against fine quadrature") {
    const double eps = 0.01;
    const auto f = from_function([&](double x) { return std::exp(-x * x / (w0 * w0)) * (1 + eps * x / w0); });
    // Quadrature at 10x the grid resolution, frozen below.
    const double reference = oracle::linear_ramp_centroid(w0, eps, 16e-3, 10240);
    CHECK(reference == doctest::Approx(4.99987500312e-6).epsilon(1e-10));
    CHECK(centroid(f) == doctest::Approx(4.99987500312e-6).epsilon(1e-9));
  }
  SUBCASE("dark field") {
    const auto f = from_function([](double) { return cplx{}; });
    try {
      centroid(f);
      FAIL("dark field accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == "zero-norm");
    }
    CHECK_THROWS_AS(momentum_centroid(f), Error);
  }
}

TEST_CASE("momentum centroid") {
  const double k = kBeam.wavenumber();
  const auto g = gaussian();
  CHECK(std::abs(momentum_centroid(g)) < 1e-9 * k);
  const double a = 10e-6;
  const auto t = apply_tilt(g, a);
  CHECK(momentum_centroid(t) == doctest::Approx(k * a).epsilon(1e-3));
  CHECK(momentum_centroid(parity_x(t)) == doctest::Approx(-k * a).epsilon(1e-3));
  CHECK(std::abs(momentum_centroid(parity_x(t)) + momentum_centroid(t)) < 1e-9 * k);
}

TEST_CASE("propagation") {
  const auto g = gaussian();
  const double k = kBeam.wavenumber();
  SUBCASE("zero distance is the identity") { CHECK(distance(propagate(g, 0.0), g) < 1e-12); }
  SUBCASE("walk-off of a tilted beam") {
    const double a = 10e-6;
    CHECK(centroid(propagate(apply_tilt(g, a), 1.0)) == doctest::Approx(a).epsilon(5e-3));
  }
  SUBCASE("diffraction against closed-form width") {
    const double z = 0.5 * kBeam.rayleigh_range();
    const double expected = oracle::beam_width(kBeam.waist, kBeam.wavelength, z);
    CHECK(2.0 * rms_width(propagate(g, z)) == doctest::Approx(expected).epsilon(1e-3));
    CHECK(kBeam.width_at(z) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("unitary, composable, commutes with parity") {
    const auto f = apply_tilt(g, 3e-6);
    for (double z : {0.1, 0.7, 2.0, 4.0}) {
      CAPTURE(z);
      const auto p = propagate(f, z);
      CHECK(std::abs(p.norm() - f.norm()) < 1e-10);
      CHECK(distance(propagate(propagate(f, z), 0.3), propagate(f, z + 0.3)) < 1e-10);
      CHECK(distance(parity_x(propagate(f, z)), propagate(parity_x(f), z)) < 1e-10);
    }
  }
  SUBCASE("walk-off law within the small-angle regime") {
    for (double a : {-1e-6, 2e-7, 5e-7, 1e-6}) {
      CAPTURE(a);
      REQUIRE(k * std::abs(a) * kBeam.waist <= 1e-2 + 1e-12);
      const double z = 1.3;
      CHECK(centroid(propagate(apply_tilt(g, a), z)) - centroid(g) == doctest::Approx(z * a).epsilon(5e-3));
    }
  }
  SUBCASE("aliasing guard") {
    const TransverseGrid narrow(256, 8e-3);
    const auto h = make_gaussian(kBeam, narrow);
    try {
      propagate(h, 200.0);
      FAIL("aliasing not detected");
    } catch (const Error& e) {
      CHECK(e.kind() == "aliasing");
      CHECK(e.category() == ErrorCategory::NumericalGuard);
    }
    CHECK_THROWS_AS(propagate(g, -1.0), Error);
  }
}

TEST_CASE("parity") {
  const auto g = gaussian();
  const double w0 = kBeam.waist;
  CHECK(distance(parity_x(g), g) < 1e-12);
  auto odd = from_function([&](double x) { return x / w0 * std::exp(-x * x / (w0 * w0)); });
  odd = cplx{1.0 / odd.norm()} * odd;
  CHECK(distance(parity_x(odd), cplx{-1.0} * odd) < 1e-12);
  CHECK(std::abs(inner_product(g, odd)) < 1e-12);
  const auto r = random_field(3);
  CHECK(distance(parity_x(parity_x(r)), r) == 0.0);
}

TEST_CASE("parity decomposition") {
  const auto g = gaussian();
  const double k = kBeam.wavenumber();
  const double w0 = kBeam.waist;

  SUBCASE("odd fraction of a tilted beam") {
    for (double u : {1e-3, 3e-3, 1e-2}) {
      CAPTURE(u);
      const double a = u / (k * w0);
      const auto parts = decompose_parity(apply_tilt(g, a));
      const double frac = parts.odd.power() / parts.even.power() / (1.0 + parts.odd.power() / parts.even.power());
      const double exact = oracle::tilted_odd_fraction(k, a, w0);
      CHECK(frac == doctest::Approx(exact).epsilon(1e-6));
      CHECK(frac == doctest::Approx(u * u / 4).epsilon(0.05));
    }
  }
  SUBCASE("even input has no odd part") {
    CHECK(decompose_parity(g).odd.norm() < 1e-12);
  }
  SUBCASE("reconstruction and orthogonality") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto r = random_field(seed);
      const auto parts = decompose_parity(r);
      CHECK(distance(parts.even + parts.odd, r) < 1e-14 * r.norm() + 1e-14);
      CHECK(std::abs(inner_product(parts.even, parts.odd)) < 1e-12 * r.power());
    }
  }
}

TEST_CASE("inner product") {
  const auto r = random_field(9);
  const cplx ff = inner_product(r, r);
  CHECK(ff.real() == doctest::Approx(r.power()).epsilon(1e-14));
  CHECK(std::abs(ff.imag()) < 1e-12 * ff.real());
  const auto other = make_gaussian(kBeam, TransverseGrid(2048, 16e-3));
  try {
    inner_product(r, other);
    FAIL("grid mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == "grid-mismatch");
  }
}
