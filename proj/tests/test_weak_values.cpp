#include <doctest.h>

#include "nmzi/error.hpp"
#include "nmzi/weak_values.hpp"

using namespace nmzi;

namespace {

cplx wv(MirrorId m, OutputPort port = OutputPort::Bright) {
  return weak_value(two_state_vector(port), projector(m));
}

Scenario dove(DovePlacement p) {
  Scenario s;
  s.dove = {true, p};
  return s;
}

}  // namespace

TEST_CASE("two-state vector") {
  const auto tsv = canonical_two_state_vector();
  CHECK(std::abs(tsv.overlap() - cplx{1.0 / 3.0}) < 1e-15);
  CHECK(std::abs(tsv.pre.norm() - 1.0) < 1e-12);
  CHECK(std::abs(tsv.post.norm() - 1.0) < 1e-12);
  // Hand evaluation of (1 + i*i + (-1)(-1)) / 3.
  cplx direct{};
  for (std::size_t j = 0; j < 3; ++j) direct += tsv.post.amplitude[j] * tsv.pre.amplitude[j];
  CHECK(std::abs(direct - cplx{1.0 / 3.0}) < 1e-15);
}

TEST_CASE("projector weak values") {
  const auto tsv = canonical_two_state_vector();
  CHECK(std::abs(weak_value(tsv, identity_operator()) - 1.0) < 1e-12);
  const double expected[] = {1, -1, 1, 0, 0};
  for (MirrorId m : kAllMirrors) {
    CAPTURE(to_string(m));
    CHECK(std::abs(weak_value(tsv, projector(m)) - expected[static_cast<int>(m)]) < 1e-12);
  }
  CHECK(std::abs(wv(MirrorId::A) + wv(MirrorId::B) + wv(MirrorId::C) - 1.0) < 1e-12);
  const auto sum = projector(MirrorId::A) + projector(MirrorId::C);
  CHECK(std::abs(weak_value(tsv, sum) - wv(MirrorId::A) - wv(MirrorId::C)) < 1e-12);
  CHECK(wv(MirrorId::E) == wv(MirrorId::A) + wv(MirrorId::B));
  CHECK(wv(MirrorId::F) == wv(MirrorId::A) + wv(MirrorId::B));
}

TEST_CASE("alternate port weak values") {
  const double expected[] = {1, 1, -1, 2, 2};
  for (MirrorId m : kAllMirrors) {
    CAPTURE(to_string(m));
    CHECK(std::abs(wv(m, OutputPort::AlternateInnerPort) - expected[static_cast<int>(m)]) < 1e-12);
  }
}

TEST_CASE("orthogonal post-selection") {
  TwoStateVector tsv = canonical_two_state_vector();
  tsv.post.amplitude = {1.0, 0.0, 1.0};
  try {
    weak_value(tsv, projector(MirrorId::A));
    FAIL("orthogonal selection accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == "orthogonal-selection");
  }
}

TEST_CASE("effective weak values") {
  const Scenario plain;
  const Scenario before = dove(DovePlacement::BeforeInnerMirrors);
  const Scenario after = dove(DovePlacement::AfterInnerMirrors);
  CHECK(std::abs(effective_weak_value(plain, MirrorId::E)) < 1e-2);
  CHECK(std::abs(effective_weak_value(before, MirrorId::E) + 2.0) < 1e-2);
  CHECK(std::abs(effective_weak_value(plain, MirrorId::A) - 1.0) < 1e-2);
  CHECK(std::abs(effective_weak_value(before, MirrorId::A) - 1.0) < 1e-2);
  CHECK(std::abs(effective_weak_value(after, MirrorId::A) + 1.0) < 1e-2);
  for (MirrorId m : {MirrorId::A, MirrorId::B, MirrorId::C}) {
    CHECK(std::abs(effective_weak_value(before, m) - wv(m).real()) < 1e-2);
  }
}

TEST_CASE("weak value report") {
  const auto off = weak_value_report(Scenario{});
  const auto on = weak_value_report(dove(DovePlacement::BeforeInnerMirrors));
  const auto aft = weak_value_report(dove(DovePlacement::AfterInnerMirrors));
  const double eff_off[] = {1, -1, 1, 0, 0};
  for (MirrorId m : kAllMirrors) {
    const auto i = static_cast<int>(m);
    CAPTURE(to_string(m));
    CHECK(off.projector_value(m) == on.projector_value(m));
    CHECK(off.projector_value(m) == aft.projector_value(m));
    CHECK(std::abs(off.effective_value(m) - eff_off[i]) < 1e-2);
  }
  CHECK(std::abs(on.effective_value(MirrorId::E) + 2.0) < 1e-2);
  CHECK(std::abs(aft.effective_value(MirrorId::A) + 1.0) < 1e-2);
  CHECK(aft.projector_value(MirrorId::A) == cplx{1.0});
  CHECK(on.dove_enabled);
  const std::string text = on.to_text();
  CHECK(text.find("weak_value_E_re = 0") != std::string::npos);
  CHECK(text.find("effective_weak_value_E = -1.99") != std::string::npos);
}
