#include <doctest.h>

#include <random>

#include "nmzi/detection.hpp"
#include "nmzi/error.hpp"
#include "oracles.hpp"

using namespace nmzi;

namespace {

const GaussianSpec kBeam{};
const TransverseGrid kGrid{1024, 16e-3};

TransverseField shifted_gaussian(double d, double w) {
  std::vector<cplx> a(kGrid.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = kGrid.x(i) - d;
    a[i] = std::exp(-x * x / (w * w));
  }
  return {kGrid, kBeam.wavenumber(), std::move(a)};
}

DitherProtocol only(MirrorId m, double amplitude) {
  DitherProtocol p = DitherProtocol::defaults();
  for (MirrorId j : kAllMirrors) p[j].amplitude = j == m ? amplitude : 0.0;
  return p;
}

double peak_to_peak(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

Scenario with_dove() {
  Scenario s;
  s.dove.enabled = true;
  return s;
}

}  // namespace

TEST_CASE("split signal") {
  const double w = kBeam.waist;
  CHECK(std::abs(split_signal(shifted_gaussian(0.0, w))) < 1e-12);
  for (double d : {1e-6, 5e-6, 20e-6}) {
    CAPTURE(d);
    CHECK(split_signal(shifted_gaussian(d, w)) ==
          doctest::Approx(oracle::shifted_gaussian_split(d, w)).epsilon(5e-3));
  }
  CHECK(std::abs(split_signal(shifted_gaussian(10 * w, w)) - 1.0) < 1e-9);
  const auto f = shifted_gaussian(3e-6, w);
  CHECK(std::abs(split_signal(parity_x(f)) + split_signal(f)) < 1e-12);
  const TransverseField dark(kGrid, kBeam.wavenumber(), std::vector<cplx>(kGrid.size()));
  CHECK_THROWS_AS(split_signal(dark), Error);
}

TEST_CASE("protocol validation") {
  const Scenario s;
  auto p = DitherProtocol::defaults();
  CHECK_NOTHROW(p.validate_for(s));
  CHECK(p.sample_count() == 10000);

  auto bad = p;
  bad[MirrorId::B].frequency = 310.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad[MirrorId::F].frequency = 620;  // second harmonic of A
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.sample_rate = 2000;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad[MirrorId::C].frequency = 310;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad[MirrorId::E].amplitude = 20e-6;
  CHECK_NOTHROW(bad.validate());
  CHECK_THROWS_AS(bad.validate_for(s), ConfigError);
}

TEST_CASE("dither series") {
  const Scenario plain;
  SUBCASE("no dither is a flat zero") {
    const auto series = run_dither(plain, only(MirrorId::A, 0.0));
    for (double v : series.signal) CHECK(std::abs(v) < 1e-15);
  }
  SUBCASE("E dither without prisms is nulled") {
    const auto off = run_dither(plain, only(MirrorId::E, 1e-6));
    const auto on = run_dither(with_dove(), only(MirrorId::E, 1e-6));
    CHECK(peak_to_peak(off.signal) < 1e-4 * peak_to_peak(on.signal));
  }
  SUBCASE("A dither amplitude against the split-detector prediction") {
    const double amp = 1e-6;
    const auto p = only(MirrorId::A, amp);
    const auto rep = spectrum(run_dither(plain, p).signal, p);
    // Displacement z_A A_A of a third of the power on the beam of width w(L).
    const double w = oracle::beam_width(kBeam.waist, kBeam.wavelength, plain.path_length);
    const double d = plain.distance(MirrorId::A) * amp;
    const double predicted = oracle::shifted_gaussian_split(d, w);
    CHECK(rep.peak(MirrorId::A).magnitude() == doctest::Approx(predicted).epsilon(2e-2));
    CHECK(rep.peak(MirrorId::A).frequency == 310.0);
  }
}

TEST_CASE("spectrum") {
  const auto p = DitherProtocol::defaults();
  SUBCASE("zero series") {
    const std::vector<double> zero(p.sample_count(), 0.0);
    const auto rep = spectrum(zero, p);
    for (const auto& pk : rep.peaks) CHECK(pk.magnitude() == 0.0);
    CHECK(rep.noise_floor == 0.0);
  }
  SUBCASE("pure tones") {
    std::vector<double> s(p.sample_count());
    const double two_pi = 2.0 * std::acos(-1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double t = p.time(i);
      s[i] = 0.5 * std::sin(two_pi * 310 * t) + 0.25 * std::cos(two_pi * 490 * t);
    }
    const auto rep = spectrum(s, p);
    CHECK(rep.peak(MirrorId::A).amplitude.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.peak(MirrorId::A).amplitude.imag() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(rep.peak(MirrorId::E).amplitude.real() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.peak(MirrorId::B).magnitude() < 1e-12);
    CHECK(rep.noise_floor < 1e-12);
  }
  SUBCASE("length mismatch") {
    const std::vector<double> s(10);
    try {
      spectrum(s, p);
      FAIL("length mismatch accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == "length-mismatch");
    }
  }
}

TEST_CASE("spectral signature and linearity") {
  const auto p = DitherProtocol::defaults();
  const Scenario plain;
  const auto off = spectrum(run_dither(plain, p).signal, p);
  const auto on = spectrum(run_dither(with_dove(), p).signal, p);
  const double a = off.peak(MirrorId::A).magnitude();
  CHECK(off.peak(MirrorId::B).magnitude() == doctest::Approx(a).epsilon(2e-2));
  CHECK(off.peak(MirrorId::C).magnitude() == doctest::Approx(a).epsilon(2e-2));
  CHECK(off.peak(MirrorId::E).magnitude() < 1e-3 * off.max_magnitude());
  CHECK(off.peak(MirrorId::F).magnitude() < 1e-3 * off.max_magnitude());
  const double ratio = on.peak(MirrorId::E).magnitude() / on.peak(MirrorId::A).magnitude();
  CHECK(ratio == doctest::Approx(2.0 * 1.5 / 1.0).epsilon(2e-2));

  auto doubled = p;
  for (auto& m : doubled.mirror) m.amplitude *= 0.5;
  const auto half = spectrum(run_dither(with_dove(), doubled).signal, doubled);
  for (MirrorId m : {MirrorId::A, MirrorId::B, MirrorId::C, MirrorId::E}) {
    CAPTURE(to_string(m));
    CHECK(on.peak(m).magnitude() == doctest::Approx(2.0 * half.peak(m).magnitude()).epsilon(2e-2));
  }
}

TEST_CASE("photon sampling") {
  const auto g = make_gaussian(kBeam, kGrid);
  const std::size_t n = 1000000;
  const auto s = sample_photons(g, n, 11);
  CHECK(s.count() == n);
  const double sigma = kBeam.waist / 2.0;  // std dev of exp(-2 x^2 / w0^2)
  CHECK(std::abs(s.mean()) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
  for (double x : s.positions) {
    REQUIRE(x >= -kGrid.half_width());
    REQUIRE(x <= kGrid.half_width());
  }
  CHECK(sample_photons(g, 1000, 5).positions == sample_photons(g, 1000, 5).positions);
  CHECK(sample_photons(g, 1000, 5).positions != sample_photons(g, 1000, 6).positions);

  SUBCASE("dither snapshot with prisms") {
    const Scenario sc = with_dove();
    const auto p = DitherProtocol::defaults();
    const auto f = detector_field_numeric(sc, p.tilts_at(3));
    const auto ph = sample_photons(f, n, 12);
    const double se = rms_width(f) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(ph.mean() - centroid(f)) < 4.0 * se);
  }
}

TEST_CASE("photon dither experiment") {
  const auto p = DitherProtocol::defaults();
  const auto on = photon_dither_experiment(with_dove(), p, 100000, 1);
  const auto off = photon_dither_experiment(Scenario{}, p, 100000, 1);
  MESSAGE("shot-noise floor " << on.noise_floor << ", E peak " << on.peak(MirrorId::E).magnitude());
  CHECK(on.peak(MirrorId::E).magnitude() > 5.0 * on.noise_floor);
  CHECK(off.peak(MirrorId::E).magnitude() < 2.0 * off.noise_floor);
  const auto again = photon_dither_series(with_dove(), p, 1000, 3);
  CHECK(again.signal == photon_dither_series(with_dove(), p, 1000, 3).signal);
  // Explicit draws and the binomial shortcut describe the same statistics.
  const auto explicit_draws = photon_dither_experiment(with_dove(), p, kExplicitPhotonLimit, 4);
  const auto binomial = photon_dither_experiment(with_dove(), p, kExplicitPhotonLimit + 1, 4);
  CHECK(binomial.noise_floor == doctest::Approx(explicit_draws.noise_floor).epsilon(0.1));
}
