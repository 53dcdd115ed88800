#pragma once
// Two-state-vector bookkeeping over the path basis {A, B, C}: projector weak
// values, and effective weak values read off the detector's centroid
// response.

#include <array>
#include <complex>
#include <string>

#include "nmzi/elements.hpp"
#include "nmzi/interferometer.hpp"

namespace nmzi {

/// Amplitudes over the path basis {A, B, C}.
struct PathState {
  std::array<cplx, 3> amplitude{};
  double norm() const noexcept;
};

/// Pre-selected ket and post-selected bra. The bra is stored as the row of
/// coefficients multiplying <A|, <B|, <C| (not conjugated).
struct TwoStateVector {
  PathState pre;
  PathState post;
  /// <Phi|Psi> = sum_j post_j pre_j
  cplx overlap() const noexcept;
};

using PathOperator = std::array<std::array<cplx, 3>, 3>;

PathOperator identity_operator() noexcept;
/// Projector onto the paths passing mirror m (E and F project onto {A, B}).
PathOperator projector(MirrorId m) noexcept;
PathOperator operator+(const PathOperator& a, const PathOperator& b) noexcept;

/// (|A> + i|B> - |C>)/sqrt(3) prepared and post-selected.
TwoStateVector canonical_two_state_vector() noexcept;
/// Two-state vector for a detection at the given port. Depends on the port
/// only: Dove prisms are the identity on the aligned system.
TwoStateVector two_state_vector(OutputPort port) noexcept;

/// <Phi|op|Psi> / <Phi|Psi>. Throws orthogonal-selection if |<Phi|Psi>| <= 1e-12.
cplx weak_value(const TwoStateVector& tsv, const PathOperator& op);

/// z-normalised first-order centroid response d<x>/d(alpha_j) / z_j at zero
/// tilt, by a central difference on the numeric engine with step
/// 1e-2 / (k w0).
double effective_weak_value(const NumericEngine& engine, MirrorId m);
double effective_weak_value(const Scenario& s, MirrorId m);

struct WeakValueReport {
  std::array<cplx, 5> projector{};    ///< indexed by MirrorId
  std::array<double, 5> effective{};  ///< indexed by MirrorId
  bool dove_enabled = false;
  DovePlacement placement = DovePlacement::BeforeInnerMirrors;
  OutputPort port = OutputPort::Bright;

  cplx projector_value(MirrorId m) const noexcept { return projector[static_cast<std::size_t>(m)]; }
  double effective_value(MirrorId m) const noexcept { return effective[static_cast<std::size_t>(m)]; }
  /// Flat "key = value" block.
  std::string to_text() const;
};

WeakValueReport weak_value_report(const Scenario& s);

}  // namespace nmzi
