#include "nmzi/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "nmzi/error.hpp"
#include "nmzi/kernels.hpp"

namespace nmzi {

namespace {

constexpr double kRegimeKick = 1e-2;
constexpr double kRegimeWalkoff = 0.1;

std::string z_key(MirrorId m) { return fmt::format("z_{}", to_string(m)); }

struct PathGeometry {
  std::array<MirrorId, 3> mirrors;
  std::size_t count;
};

PathGeometry geometry(PathId p) {
  switch (p) {
    case PathId::EAF: return {{MirrorId::E, MirrorId::A, MirrorId::F}, 3};
    case PathId::EBF: return {{MirrorId::E, MirrorId::B, MirrorId::F}, 3};
    case PathId::C: return {{MirrorId::C, MirrorId::C, MirrorId::C}, 1};
  }
  return {{}, 0};
}

// Sign of mirror m's kick as seen at the detector along path p: a Dove
// parity downstream of a mirror reverses both its walk-off and its kick.
double kick_sign(const DoveConfig& dove, PathId p, MirrorId m) {
  if (p != PathId::EAF) return 1.0;
  if (dove.before() && m == MirrorId::E) return -1.0;
  if (dove.after() && (m == MirrorId::E || m == MirrorId::A)) return -1.0;
  return 1.0;
}

}  // namespace

double Scenario::probe_distance() const noexcept {
  return 0.5 * (std::min(distance(MirrorId::A), distance(MirrorId::B)) + distance(MirrorId::F));
}

void Scenario::validate() const {
  for (MirrorId m : kAllMirrors) {
    const double d = distance(m);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ConfigError(z_key(m), fmt::format("{} must be positive (got {})", z_key(m), d));
    }
  }
  const double zE = distance(MirrorId::E), zF = distance(MirrorId::F);
  for (MirrorId inner : {MirrorId::A, MirrorId::B}) {
    const double zi = distance(inner);
    if (!(zE > zi)) {
      throw ConfigError("z_E", fmt::format("z_E = {} must exceed {} = {} (E precedes {})", zE,
                                           z_key(inner), zi, to_string(inner)));
    }
    if (!(zF < zi)) {
      throw ConfigError("z_F", fmt::format("z_F = {} must be below {} = {} (F follows {})", zF,
                                           z_key(inner), zi, to_string(inner)));
    }
  }
  if (!(path_length > zE) || !(path_length > distance(MirrorId::C))) {
    throw ConfigError("path_length",
                      fmt::format("path_length = {} must exceed z_E and z_C", path_length));
  }
  beam.validate();
  if (grid.half_width() < 8.0 * beam.waist) {
    throw ConfigError("grid_half_width",
                      fmt::format("grid_half_width = {} must be at least 8 w0 = {}",
                                  grid.half_width(), 8.0 * beam.waist));
  }
}

std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig1c", "dove-after", "alt-port"};
}

Preset preset(std::string_view name) {
  Preset p;
  p.scenario.name = std::string(name);
  if (name == "fig1a") {
    p.tilt = TiltSet::single(MirrorId::A, kPresetTilt);
    p.description = "no Dove prisms, mirror A tilted";
  } else if (name == "fig1b") {
    p.tilt = TiltSet::single(MirrorId::E, kPresetTilt);
    p.description = "no Dove prisms, mirror E tilted";
  } else if (name == "fig1c") {
    p.scenario.dove = {true, DovePlacement::BeforeInnerMirrors};
    p.tilt = TiltSet::single(MirrorId::E, kPresetTilt);
    p.description = "Dove prisms before the inner mirrors, mirror E tilted";
  } else if (name == "dove-after") {
    p.scenario.dove = {true, DovePlacement::AfterInnerMirrors};
    p.tilt = TiltSet::single(MirrorId::A, kPresetTilt);
    p.description = "Dove prisms after the inner mirrors, mirror A tilted";
  } else if (name == "alt-port") {
    p.scenario.dove = {true, DovePlacement::BeforeInnerMirrors};
    p.scenario.output_port = OutputPort::AlternateInnerPort;
    p.tilt = TiltSet::single(MirrorId::E, kPresetTilt);
    p.description = "Dove prisms, final beam splitter collects the other inner port, mirror E tilted";
  } else {
    throw ConfigError("preset", fmt::format("unknown preset '{}' (known: fig1a, fig1b, fig1c, "
                                            "dove-after, alt-port)",
                                            name));
  }
  p.scenario.validate();
  return p;
}

RegimeReport small_angle_regime(const Scenario& s, const TiltSet& t) {
  RegimeReport r;
  const double kw = s.wavenumber() * s.beam.waist;
  for (MirrorId m : kAllMirrors) {
    r.max_kick = std::max(r.max_kick, kw * std::abs(t[m]));
    r.walkoff += std::abs(s.distance(m) * t[m]);
  }
  // Relative slack so that a tilt of exactly regime_tilt_limit() qualifies.
  r.within = r.max_kick <= kRegimeKick * (1.0 + 1e-12) &&
             r.walkoff <= kRegimeWalkoff * s.beam.waist;
  return r;
}

double regime_tilt_limit(const Scenario& s) noexcept {
  return kRegimeKick / (s.wavenumber() * s.beam.waist);
}

TransverseField gaussian_beam_profile(const GaussianSpec& beam, const TransverseGrid& grid,
                                      double z, double shift) {
  const double k = beam.wavenumber();
  // exp(ikz) convention: q = z - i zR.
  const cplx q0{0.0, -beam.rayleigh_range()};
  const cplx q = q0 + z;
  const cplx pre = std::pow(2.0 / (std::numbers::pi * beam.waist * beam.waist), 0.25) *
                   std::sqrt(q0 / q);
  const cplx curv = cplx{0.0, k} / (2.0 * q);
  std::vector<cplx> amp(grid.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double x = grid.x(i) - shift;
    amp[i] = pre * std::exp(curv * (x * x));
  }
  return {grid, k, std::move(amp)};
}

std::array<PathField, 3> path_fields_analytic(const Scenario& s, const TiltSet& t) {
  t.validate();
  const auto regime = small_angle_regime(s, t);
  if (!regime.within) {
    throw guard_error("regime-violation",
                      fmt::format("tilts outside the small-angle regime (max k*alpha*w0 = {:.3g}, "
                                  "walk-off = {:.3g} m)",
                                  regime.max_kick, regime.walkoff));
  }
  const double k = s.wavenumber();
  auto build = [&](PathId p) {
    const auto geo = geometry(p);
    double shift = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < geo.count; ++i) {
      const MirrorId m = geo.mirrors[i];
      const double a = kick_sign(s.dove, p, m) * t[m];
      shift += s.distance(m) * a;
      theta += a;
    }
    TransverseField phi = gaussian_beam_profile(s.beam, s.grid, s.path_length, shift);
    std::vector<cplx> amp = std::move(phi).take();
    const double weight = path_amplitude(p, s.output_port);
    for (std::size_t i = 0; i < amp.size(); ++i) {
      amp[i] *= weight * std::polar(1.0, k * theta * s.grid.x(i));
    }
    return PathField{p, TransverseField{s.grid, k, std::move(amp)}};
  };
  return {build(PathId::EAF), build(PathId::EBF), build(PathId::C)};
}

TransverseField detector_field_analytic(const Scenario& s, const TiltSet& t) {
  auto paths = path_fields_analytic(s, t);
  return paths[0].field + paths[1].field + paths[2].field;
}

NumericEngine::NumericEngine(Scenario s) : s_(std::move(s)) {
  s_.validate();
  x_.resize(s_.grid.size());
  for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = s_.grid.x(i);
  for (PathId p : kAllPaths) to_detector_[static_cast<std::size_t>(p)] = make_plan(p, 0.0);
  to_probe_[0] = make_plan(PathId::EAF, s_.probe_distance());
  to_probe_[1] = make_plan(PathId::EBF, s_.probe_distance());
}

NumericEngine::Plan NumericEngine::make_plan(PathId path, double end_distance) {
  struct Event {
    double at;
    Step::Kind kind;
    MirrorId mirror;
  };
  std::vector<Event> events;
  const auto geo = geometry(path);
  for (std::size_t i = 0; i < geo.count; ++i) {
    events.push_back({s_.distance(geo.mirrors[i]), Step::Kind::Tilt, geo.mirrors[i]});
  }
  // The y-oriented prisms on EBF and C are the identity in this 1-D model.
  if (path == PathId::EAF && s_.dove.before()) {
    const double at = 0.5 * (s_.distance(MirrorId::E) + s_.distance(MirrorId::A));
    events.push_back({at, Step::Kind::Parity, MirrorId::A});
  }
  if (path == PathId::EAF && s_.dove.after()) {
    const double at = 0.5 * (s_.distance(MirrorId::A) + s_.probe_distance());
    events.push_back({at, Step::Kind::Parity, MirrorId::A});
  }
  std::erase_if(events, [&](const Event& e) { return e.at < end_distance; });
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at > b.at; });

  auto propagator_for = [&](double dz) {
    for (std::size_t i = 0; i < propagators_.size(); ++i) {
      if (propagators_[i].distance() == dz) return i;
    }
    propagators_.emplace_back(s_.grid, s_.wavenumber(), dz);
    return propagators_.size() - 1;
  };

  Plan plan;
  const TransverseField source = make_gaussian(s_.beam, s_.grid);
  plan.start = propagators_[propagator_for(s_.path_length - events.front().at)](source).take();
  double at = events.front().at;
  for (const Event& e : events) {
    if (e.at < at) plan.steps.push_back({Step::Kind::Propagate, propagator_for(at - e.at), e.mirror});
    plan.steps.push_back({e.kind, 0, e.mirror});
    at = e.at;
  }
  if (at > end_distance) {
    plan.steps.push_back({Step::Kind::Propagate, propagator_for(at - end_distance), MirrorId::A});
  }
  return plan;
}

std::vector<cplx> NumericEngine::run(const Plan& plan, const TiltSet& t) const {
  std::vector<cplx> buf = plan.start;
  std::vector<cplx> ramp;
  const double k = s_.wavenumber();
  for (const Step& st : plan.steps) {
    switch (st.kind) {
      case Step::Kind::Propagate:
        propagators_[st.propagator].apply(buf);
        if (!satisfies_edge_guard(buf)) {
          throw guard_error("aliasing",
                            fmt::format("field reaches the outer 5% of the grid in scenario '{}'",
                                        s_.name));
        }
        break;
      case Step::Kind::Tilt: {
        const double a = t[st.mirror];
        if (a == 0.0) break;
        ramp.resize(buf.size());
        for (std::size_t i = 0; i < buf.size(); ++i) ramp[i] = std::polar(1.0, k * a * x_[i]);
        kernels::multiply(buf, ramp);
        break;
      }
      case Step::Kind::Parity:
        std::reverse(buf.begin() + 1, buf.end());
        break;
    }
  }
  return buf;
}

TransverseField NumericEngine::wrap(std::vector<cplx> samples) const {
  return {s_.grid, s_.wavenumber(), std::move(samples)};
}

std::array<PathField, 3> NumericEngine::path_fields(const TiltSet& t) const {
  t.validate();
  auto build = [&](PathId p) {
    std::vector<cplx> f = run(to_detector_[static_cast<std::size_t>(p)], t);
    const double w = path_amplitude(p, s_.output_port);
    for (auto& v : f) v *= w;
    return PathField{p, wrap(std::move(f))};
  };
  return {build(PathId::EAF), build(PathId::EBF), build(PathId::C)};
}

TransverseField NumericEngine::detector_field(const TiltSet& t) const {
  t.validate();
  std::vector<cplx> sum(s_.grid.size());
  for (PathId p : kAllPaths) {
    const std::vector<cplx> f = run(to_detector_[static_cast<std::size_t>(p)], t);
    kernels::accumulate(sum, path_amplitude(p, s_.output_port), f);
  }
  return wrap(std::move(sum));
}

TransverseField NumericEngine::field_before_f(const TiltSet& t) const {
  t.validate();
  std::vector<cplx> sum(s_.grid.size());
  kernels::accumulate(sum, path_amplitude(PathId::EAF), run(to_probe_[0], t));
  kernels::accumulate(sum, path_amplitude(PathId::EBF), run(to_probe_[1], t));
  return wrap(std::move(sum));
}

TransverseField detector_field_numeric(const Scenario& s, const TiltSet& t) {
  return NumericEngine(s).detector_field(t);
}

TransverseField field_before_f(const Scenario& s, const TiltSet& t) {
  return NumericEngine(s).field_before_f(t);
}

TransverseField alternate_port_field(const Scenario& s, const TiltSet& t) {
  if (s.output_port != OutputPort::AlternateInnerPort) {
    throw usage_error("wrong-port", "alternate_port_field needs output_port = AlternateInnerPort");
  }
  return detector_field_numeric(s, t);
}

}  // namespace nmzi
