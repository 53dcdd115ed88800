#include <doctest.h>

#include <random>

#include "nmzi/elements.hpp"
#include "nmzi/error.hpp"

using namespace nmzi;

namespace {

const GaussianSpec kBeam{};
const TransverseGrid kGrid{1024, 16e-3};

double distance(const TransverseField& f, const TransverseField& g) { return (f - g).norm(); }

TransverseField random_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<cplx> a(kGrid.size());
  for (auto& z : a) z = {n(rng), n(rng)};
  return {kGrid, kBeam.wavenumber(), std::move(a)};
}

// Random samples under a Gaussian envelope of width 2 mm.
TransverseField guarded(const TransverseField& r) {
  std::vector<cplx> a(r.amplitude().begin(), r.amplitude().end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = kGrid.x(i) / 2e-3;
    a[i] *= std::exp(-x * x);
  }
  return {kGrid, kBeam.wavenumber(), std::move(a)};
}

}  // namespace

TEST_CASE("mirror labels") {
  for (MirrorId m : kAllMirrors) CHECK(parse_mirror(to_string(m)) == m);
  CHECK_FALSE(parse_mirror("D").has_value());
}

TEST_CASE("tilt") {
  const auto g = make_gaussian(kBeam, kGrid);
  const double k = kBeam.wavenumber();
  CHECK(distance(apply_tilt(g, 0.0), g) == 0.0);
  const double a = 7e-6;
  const auto t = apply_tilt(g, a);
  CHECK(std::abs(centroid(t) - centroid(g)) < 1e-12);
  CHECK(std::abs(t.norm() - g.norm()) < 1e-12);
  CHECK(momentum_centroid(t) - momentum_centroid(g) == doctest::Approx(k * a).epsilon(1e-3));

  const auto r = random_field(1);
  CHECK(distance(apply_tilt(apply_tilt(r, 2e-6), 5e-6), apply_tilt(r, 7e-6)) < 1e-12 * r.norm());
  try {
    apply_tilt(g, 2e-3);
    FAIL("large tilt accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == "angle-out-of-range");
  }
  TiltSet bad;
  bad[MirrorId::F] = -1e-3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(TiltSet::single(MirrorId::E, 9e-4).validate());
}

TEST_CASE("dove prism") {
  const auto g = make_gaussian(kBeam, kGrid);
  CHECK(distance(apply_dove_x(g), g) < 1e-12);
  const auto t = apply_tilt(g, 4e-6);
  CHECK(momentum_centroid(apply_dove_x(t)) == doctest::Approx(-momentum_centroid(t)).epsilon(1e-9));
  const auto r = random_field(2);
  CHECK(distance(apply_dove_x(apply_dove_x(r)), r) == 0.0);
  CHECK(std::abs(apply_dove_x(r).norm() - r.norm()) < 1e-12 * r.norm());
  // The unpaired x = -W sample breaks the identity, so the field must vanish at the edge.
  const auto env = guarded(r);
  REQUIRE(satisfies_edge_guard(env));
  for (double a : {-9e-6, 1e-6, 5e-5}) {
    CAPTURE(a);
    CHECK(distance(apply_dove_x(apply_tilt(env, a)), apply_tilt(apply_dove_x(env), -a)) < 1e-12 * env.norm());
  }
}

TEST_CASE("path amplitudes") {
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(path_amplitude(PathId::EAF) == doctest::Approx(s).epsilon(1e-15));
  CHECK(path_amplitude(PathId::EBF) == doctest::Approx(-s).epsilon(1e-15));
  CHECK(path_amplitude(PathId::C) == doctest::Approx(s).epsilon(1e-15));
  for (OutputPort port : {OutputPort::Bright, OutputPort::AlternateInnerPort}) {
    double sum = 0.0;
    for (PathId p : kAllPaths) sum += path_amplitude(p, port) * path_amplitude(p, port);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(path_amplitude(PathId::EBF, OutputPort::AlternateInnerPort) == doctest::Approx(s));
  CHECK(path_amplitude(PathId::C, OutputPort::AlternateInnerPort) == doctest::Approx(-s));
}
