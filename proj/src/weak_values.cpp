#include "nmzi/weak_values.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nmzi/error.hpp"

namespace nmzi {

namespace {

constexpr double kOrthogonal = 1e-12;

std::size_t idx(MirrorId m) { return static_cast<std::size_t>(m); }

}  // namespace

double PathState::norm() const noexcept {
  double s = 0.0;
  for (const cplx& a : amplitude) s += std::norm(a);
  return std::sqrt(s);
}

cplx TwoStateVector::overlap() const noexcept {
  cplx s = 0.0;
  for (std::size_t j = 0; j < 3; ++j) s += post.amplitude[j] * pre.amplitude[j];
  return s;
}

PathOperator identity_operator() noexcept {
  PathOperator op{};
  for (std::size_t j = 0; j < 3; ++j) op[j][j] = 1.0;
  return op;
}

PathOperator projector(MirrorId m) noexcept {
  PathOperator op{};
  switch (m) {
    case MirrorId::A: op[0][0] = 1.0; break;
    case MirrorId::B: op[1][1] = 1.0; break;
    case MirrorId::C: op[2][2] = 1.0; break;
    case MirrorId::E:
    case MirrorId::F:
      op[0][0] = 1.0;
      op[1][1] = 1.0;
      break;
  }
  return op;
}

PathOperator operator+(const PathOperator& a, const PathOperator& b) noexcept {
  PathOperator r{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
  }
  return r;
}

TwoStateVector canonical_two_state_vector() noexcept {
  const double s = 1.0 / std::sqrt(3.0);
  const cplx i{0.0, 1.0};
  PathState psi{{s, i * s, -s}};
  return {psi, psi};
}

TwoStateVector two_state_vector(OutputPort port) noexcept {
  TwoStateVector tsv = canonical_two_state_vector();
  if (port == OutputPort::AlternateInnerPort) {
    // post_j * pre_j proportional to (+1, +1, -1): the inner arms add, the
    // reference arm enters with the opposite sign.
    const double s = 1.0 / std::sqrt(3.0);
    tsv.post = PathState{{s, cplx{0.0, -s}, s}};
  }
  return tsv;
}

cplx weak_value(const TwoStateVector& tsv, const PathOperator& op) {
  const cplx denom = tsv.overlap();
  if (std::abs(denom) <= kOrthogonal) {
    throw guard_error("orthogonal-selection", "pre- and post-selected states are orthogonal");
  }
  cplx num = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) num += tsv.post.amplitude[i] * op[i][j] * tsv.pre.amplitude[j];
  }
  return num / denom;
}

double effective_weak_value(const NumericEngine& engine, MirrorId m) {
  const Scenario& s = engine.scenario();
  const double h = regime_tilt_limit(s);
  const double up = centroid(engine.detector_field(TiltSet::single(m, h)));
  const double down = centroid(engine.detector_field(TiltSet::single(m, -h)));
  return (up - down) / (2.0 * h) / s.distance(m);
}

double effective_weak_value(const Scenario& s, MirrorId m) {
  return effective_weak_value(NumericEngine(s), m);
}

WeakValueReport weak_value_report(const Scenario& s) {
  WeakValueReport r;
  r.dove_enabled = s.dove.enabled;
  r.placement = s.dove.placement;
  r.port = s.output_port;
  const TwoStateVector tsv = two_state_vector(s.output_port);
  const NumericEngine engine(s);
  for (MirrorId m : kAllMirrors) {
    r.projector[idx(m)] = weak_value(tsv, projector(m));
    r.effective[idx(m)] = effective_weak_value(engine, m);
  }
  return r;
}

std::string WeakValueReport::to_text() const {
  std::string out;
  out += fmt::format("dove_enabled = {}\n", dove_enabled ? "true" : "false");
  out += fmt::format("dove_placement = {}\n",
                     placement == DovePlacement::BeforeInnerMirrors ? "before" : "after");
  out += fmt::format("output_port = {}\n", port == OutputPort::Bright ? "bright" : "alternate");
  for (MirrorId m : kAllMirrors) {
    const cplx w = projector_value(m);
    out += fmt::format("weak_value_{}_re = {:.15g}\n", to_string(m), w.real());
    out += fmt::format("weak_value_{}_im = {:.15g}\n", to_string(m), w.imag());
  }
  for (MirrorId m : kAllMirrors) {
    out += fmt::format("effective_weak_value_{} = {:.6f}\n", to_string(m), effective_value(m));
  }
  return out;
}

}  // namespace nmzi
