#pragma once
// The nested Mach-Zehnder interferometer in the unfolded-path picture.
//
// Three paths join source and detector: EAF (mirrors E, A, F), EBF (E, B, F)
// and C. Each has the same optical length L; z_j is the optical distance
// from mirror j to the detector. Two engines evaluate the detector field:
//
//  * analytic: first-order closed form, each path contributes
//    amplitude * phi(x - shift) * exp(i k theta x), with phi the free-space
//    Gaussian beam after L and a Dove parity flipping the sign of the kicks
//    it acts on;
//  * numeric: element-by-element propagation of the sampled field.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "nmzi/elements.hpp"
#include "nmzi/field.hpp"

namespace nmzi {

struct Scenario {
  std::string name = "custom";
  /// Optical distance mirror -> detector, indexed by MirrorId.
  std::array<double, 5> z{1.0, 1.0, 1.0, 1.5, 0.5};
  /// Source (beam waist) -> detector along every unfolded path.
  double path_length = 2.0;
  GaussianSpec beam{};
  TransverseGrid grid{1024, 16e-3};
  DoveConfig dove{};
  OutputPort output_port = OutputPort::Bright;

  double distance(MirrorId m) const noexcept { return z[static_cast<std::size_t>(m)]; }
  double& distance(MirrorId m) noexcept { return z[static_cast<std::size_t>(m)]; }
  double wavenumber() const noexcept { return beam.wavenumber(); }
  /// Plane between the inner exit beam splitter and mirror F.
  double probe_distance() const noexcept;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Named scenario plus the tilt it is meant to demonstrate.
struct Preset {
  Scenario scenario;
  TiltSet tilt;
  std::string description;
};

/// Tilt used by the presets (rad); inside the small-angle regime for the
/// default beam.
inline constexpr double kPresetTilt = 1e-6;

std::vector<std::string> preset_names();
/// Throws ConfigError (key "preset") for unknown names.
Preset preset(std::string_view name);

struct RegimeReport {
  double max_kick = 0.0;  ///< max_j k |alpha_j| w0
  double walkoff = 0.0;   ///< sum_j |z_j alpha_j|
  bool within = true;
};
/// Small-angle regime: k|alpha|w0 <= 1e-2 for every mirror and
/// sum |z_j alpha_j| <= 0.1 w0.
RegimeReport small_angle_regime(const Scenario& s, const TiltSet& t);
/// Largest single tilt inside the regime for this beam.
double regime_tilt_limit(const Scenario& s) noexcept;

struct PathField {
  PathId path;
  TransverseField field;  ///< already weighted by the path amplitude
};

/// Closed-form free-space Gaussian beam after distance z, sampled on grid.
TransverseField gaussian_beam_profile(const GaussianSpec& beam, const TransverseGrid& grid,
                                      double z, double shift = 0.0);

/// First-order engine. Throws regime-violation outside the small-angle regime.
TransverseField detector_field_analytic(const Scenario& s, const TiltSet& t);
std::array<PathField, 3> path_fields_analytic(const Scenario& s, const TiltSet& t);

/// Element-by-element propagation engine. Reusable across many tilt sets;
/// evaluation is const and thread-safe.
class NumericEngine {
 public:
  explicit NumericEngine(Scenario s);

  const Scenario& scenario() const noexcept { return s_; }

  std::array<PathField, 3> path_fields(const TiltSet& t) const;
  TransverseField detector_field(const TiltSet& t) const;
  /// Coherent sum of the EAF and EBF arms at the pre-F probe plane, with the
  /// inner interferometer's relative sign (+1, -1)/sqrt(3).
  TransverseField field_before_f(const TiltSet& t) const;

 private:
  struct Step {
    enum class Kind { Propagate, Tilt, Parity } kind;
    std::size_t propagator = 0;  // index into propagators_
    MirrorId mirror = MirrorId::A;
  };
  struct Plan {
    std::vector<cplx> start;  // field at the first mirror of the path
    std::vector<Step> steps;
  };

  Plan make_plan(PathId path, double end_distance);
  std::vector<cplx> run(const Plan& plan, const TiltSet& t) const;
  TransverseField wrap(std::vector<cplx> samples) const;

  Scenario s_;
  std::vector<FresnelPropagator> propagators_;
  std::array<Plan, 3> to_detector_;
  std::array<Plan, 2> to_probe_;  // EAF, EBF
  std::vector<double> x_;
};

TransverseField detector_field_numeric(const Scenario& s, const TiltSet& t);
TransverseField field_before_f(const Scenario& s, const TiltSet& t);
/// Detector field with the alternate inner port collected. Throws
/// wrong-port unless s.output_port == AlternateInnerPort.
TransverseField alternate_port_field(const Scenario& s, const TiltSet& t);

/// Probability of a detection at the modelled port (field power).
inline double detection_probability(const TransverseField& f) { return f.power(); }

}  // namespace nmzi
