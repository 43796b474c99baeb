#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles/dense_sim.hpp"
#include "oracles/finite_diff.hpp"
#include "qfraud/qsim.hpp"
#include "qfraud/rng.hpp"

using namespace qfraud;
using std::numbers::pi;

namespace {

const Amplitude I(0.0, 1.0);

void expect_amps(const StateVector& s, const std::vector<Amplitude>& want, double tol = 1e-15) {
  ASSERT_EQ(s.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(s[i].real(), want[i].real(), tol) << i;
    EXPECT_NEAR(s[i].imag(), want[i].imag(), tol) << i;
  }
}

StateVector random_state(Rng& rng, int q) {
  std::vector<Amplitude> a(std::size_t(1) << q);
  double norm = 0.0;
  for (auto& x : a) {
    x = {rng.normal(), rng.normal()};
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return StateVector::from_amplitudes(a);
}

CircuitSpec random_spec(Rng& rng, int max_q) {
  const int q = 1 + static_cast<int>(rng.below(max_q));
  const int layers = 1 + static_cast<int>(rng.below(2));
  const auto kind = rng.bernoulli(0.5) ? EntanglerKind::Chain : EntanglerKind::Ring;
  std::vector<Axis> rot{Axis::Y, Axis::X};
  if (rng.bernoulli(0.3)) rot = {rng.bernoulli(0.5) ? Axis::X : Axis::Y};
  return CircuitSpec::make(q, layers, kind, rot);
}

std::vector<double> uniform_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST(ZeroState, Amplitudes) {
  expect_amps(zero_state(1), {1, 0});
  expect_amps(zero_state(2), {1, 0, 0, 0});
  EXPECT_DOUBLE_EQ(zero_state(5).norm_squared(), 1.0);
  EXPECT_THROW(zero_state(0), std::invalid_argument);
  EXPECT_THROW(zero_state(21), std::invalid_argument);
}

TEST(Rotation, KnownValues) {
  expect_amps(apply_rotation(zero_state(1), Axis::Y, 0, 0.0), {1, 0});
  expect_amps(apply_rotation(zero_state(1), Axis::Y, 0, pi), {0, 1});
  const double h = std::sqrt(0.5);
  expect_amps(apply_rotation(zero_state(1), Axis::X, 0, pi / 2), {h, -I * h});
  EXPECT_THROW(apply_rotation(zero_state(2), Axis::X, 2, 0.1), std::out_of_range);
}

TEST(Rotation, InverseRestoresStateAndNormIsPreserved) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int q = 1 + static_cast<int>(rng.below(6));
    StateVector s = random_state(rng, q);
    const StateVector orig = s;
    const Axis axis = rng.bernoulli(0.5) ? Axis::X : Axis::Y;
    const int k = static_cast<int>(rng.below(q));
    const double th = rng.uniform(-7, 7);
    s.apply_rotation(axis, k, th);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    s.apply_rotation(axis, k, -th);
    for (std::size_t i = 0; i < s.size(); ++i) ASSERT_NEAR(std::abs(s[i] - orig[i]), 0.0, 1e-12);
  }
}

TEST(Cnot, TruthTableAndInvolution) {
  // |10> means qubit 1 = 1, qubit 0 = 0: basis index 2. Control 1, target 0.
  StateVector s = StateVector::from_amplitudes({0, 0, 1, 0});
  expect_amps(apply_cnot(s, 1, 0), {0, 0, 0, 1});
  expect_amps(apply_cnot(zero_state(2), 1, 0), {1, 0, 0, 0});
  EXPECT_THROW(apply_cnot(zero_state(2), 1, 1), std::invalid_argument);
  EXPECT_THROW(apply_cnot(zero_state(2), 0, 2), std::out_of_range);

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 2 + static_cast<int>(rng.below(5));
    StateVector r = random_state(rng, q);
    const int c = static_cast<int>(rng.below(q));
    const int t = (c + 1 + static_cast<int>(rng.below(q - 1))) % q;
    StateVector twice = apply_cnot(apply_cnot(r, c, t), c, t);
    for (std::size_t i = 0; i < r.size(); ++i) ASSERT_NEAR(std::abs(twice[i] - r[i]), 0.0, 1e-12);
  }
}

TEST(AngleEncode, KnownValues) {
  expect_amps(angle_encode(std::vector<double>{0, 0, 0}), {1, 0, 0, 0, 0, 0, 0, 0});
  expect_amps(angle_encode(std::vector<double>{pi / 2}), {0, I}, 1e-16);
  expect_amps(angle_encode(std::vector<double>{pi / 4, pi / 4}), {0.5, 0.5 * I, 0.5 * I, -0.5},
              1e-15);
}

TEST(AngleEncode, EqualsRxOfMinusTwoX) {
  Rng rng(3);
  const auto x = uniform_vec(rng, 4, -3, 3);
  StateVector s = zero_state(4);
  for (int i = 0; i < 4; ++i) s.apply_rotation(Axis::X, i, -2 * x[i]);
  const StateVector e = angle_encode(x);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(s[i] - e[i]), 0.0, 1e-14);
}

TEST(Entangler, Layouts) {
  EXPECT_EQ(make_entangler(3, EntanglerKind::Chain), (std::vector<CnotPair>{{0, 1}, {1, 2}}));
  EXPECT_EQ(make_entangler(3, EntanglerKind::Ring), (std::vector<CnotPair>{{0, 1}, {1, 2}, {2, 0}}));
  EXPECT_EQ(make_entangler(2, EntanglerKind::Ring), (std::vector<CnotPair>{{0, 1}}));
  EXPECT_TRUE(make_entangler(1, EntanglerKind::Chain).empty());
  EXPECT_EQ(parse_entangler("ring"), EntanglerKind::Ring);
  EXPECT_THROW(parse_entangler("star"), std::invalid_argument);
}

TEST(CircuitSpec, ParameterCountAndValidation) {
  EXPECT_EQ(CircuitSpec::make(6, 1).num_params(), 12u);
  EXPECT_EQ(CircuitSpec::make(16, 2).num_params(), 64u);
  CircuitSpec bad = CircuitSpec::make(3, 1);
  bad.entangler.push_back({1, 1});
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.entangler.back() = {0, 3};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(RunVqc, ZeroInputsGiveAllOnes) {
  for (int q : {1, 3, 6}) {
    const auto spec = CircuitSpec::make(q, 2, EntanglerKind::Ring);
    const auto z = run_vqc(std::vector<double>(q, 0.0), spec, std::vector<double>(spec.num_params(), 0.0));
    for (double v : z) EXPECT_NEAR(v, 1.0, 1e-15);
  }
}

TEST(RunVqc, SingleQubitRyPi) {
  const auto spec = CircuitSpec::make(1, 1, EntanglerKind::Chain, {Axis::Y});
  EXPECT_NEAR(run_vqc(std::vector<double>{0.0}, spec, std::vector<double>{pi})[0], -1.0, 1e-15);
}

TEST(RunVqc, ShapeErrors) {
  const auto spec = CircuitSpec::make(2, 1);
  EXPECT_THROW(run_vqc(std::vector<double>{0.0}, spec, std::vector<double>(4)), std::invalid_argument);
  EXPECT_THROW(run_vqc(std::vector<double>{0.0, 0.0}, spec, std::vector<double>(3)), std::invalid_argument);
}

TEST(RunVqc, MatchesDenseOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = random_spec(rng, 3);
    const auto x = uniform_vec(rng, spec.num_qubits, -pi, pi);
    const auto w = uniform_vec(rng, spec.num_params(), 0, 2 * pi);
    const auto got = run_vqc(x, spec, w);
    const auto want = oracle::run_vqc(x, spec, w);
    for (int i = 0; i < spec.num_qubits; ++i) {
      ASSERT_NEAR(got[i], want[i], 1e-10) << trial;
      ASSERT_LE(std::abs(got[i]), 1.0 + 1e-12);
    }
    const auto psi = prepare_state(x, spec, w);
    ASSERT_NEAR(psi.norm_squared(), 1.0, 1e-10);
    const auto dense = oracle::prepare(x, spec, w);
    for (std::size_t i = 0; i < psi.size(); ++i) ASSERT_NEAR(std::abs(psi[i] - dense(i)), 0.0, 1e-10);
  }
}

TEST(ParamShift, KnownSingleQubitValues) {
  const auto spec = CircuitSpec::make(1, 1, EntanglerKind::Chain, {Axis::Y});
  const std::vector<double> x{0.0}, up{1.0};
  EXPECT_NEAR(param_shift_grad(x, spec, std::vector<double>{0.0}, up).w[0], 0.0, 1e-15);
  EXPECT_NEAR(param_shift_grad(x, spec, std::vector<double>{pi / 2}, up).w[0], -1.0, 1e-15);
}

TEST(ParamShift, MatchesFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = random_spec(rng, 4);
    const auto x = uniform_vec(rng, spec.num_qubits, -pi, pi);
    const auto w = uniform_vec(rng, spec.num_params(), 0, 2 * pi);
    const auto up = uniform_vec(rng, spec.num_qubits, -1, 1);
    auto contract = [&](const std::vector<double>& z) {
      double s = 0;
      for (std::size_t i = 0; i < z.size(); ++i) s += up[i] * z[i];
      return s;
    };
    const auto g = param_shift_grad(x, spec, w, up);
    const auto fd_w = oracle::central_diff([&](const std::vector<double>& ww) { return contract(run_vqc(x, spec, ww)); }, w);
    const auto fd_x = oracle::central_diff([&](const std::vector<double>& xx) { return contract(run_vqc(xx, spec, w)); }, x);
    ASSERT_LT(oracle::rel_error(g.w, fd_w), 1e-5) << trial;
    ASSERT_LT(oracle::rel_error(g.x, fd_x), 1e-5) << trial;
  }
}

TEST(Adjoint, AgreesWithParamShift) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = random_spec(rng, 6);
    const auto x = uniform_vec(rng, spec.num_qubits, -pi, pi);
    const auto w = uniform_vec(rng, spec.num_params(), 0, 2 * pi);
    const auto up = uniform_vec(rng, spec.num_qubits, -1, 1);
    const auto a = adjoint_grad(x, spec, w, up);
    const auto p = param_shift_grad(x, spec, w, up);
    for (std::size_t i = 0; i < w.size(); ++i) ASSERT_NEAR(a.w[i], p.w[i], 1e-12);
    for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(a.x[i], p.x[i], 1e-12);
  }
}
