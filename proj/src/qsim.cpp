#include "qfraud/qsim.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfraud {
namespace {

constexpr Amplitude kI{0.0, 1.0};

void check_shapes(std::span<const double> x, const CircuitSpec& spec, std::span<const double> w) {
  spec.validate();
  if (x.size() != static_cast<std::size_t>(spec.num_qubits)) {
    throw std::invalid_argument("vqc: input length " + std::to_string(x.size()) +
                                " does not match qubit count " +
                                std::to_string(spec.num_qubits));
  }
  if (w.size() != spec.num_params()) {
    throw std::invalid_argument("vqc: expected " + std::to_string(spec.num_params()) +
                                " angles, got " + std::to_string(w.size()));
  }
}

double weighted_sum(std::span<const double> upstream, const std::vector<double>& plus,
                    const std::vector<double>& minus) {
  double acc = 0.0;
  for (std::size_t i = 0; i < upstream.size(); ++i) acc += upstream[i] * (plus[i] - minus[i]);
  return acc;
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amps) {
  if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
    throw std::invalid_argument("amplitude count must be a power of two >= 2");
  }
  const int q = std::countr_zero(amps.size());
  if (q > kMaxQubits) throw std::invalid_argument("too many qubits");
  StateVector s;
  s.num_qubits_ = q;
  s.amps_ = std::move(amps);
  return s;
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                            std::to_string(num_qubits_) + " qubits");
  }
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void StateVector::apply_rotation(Axis axis, int qubit, double theta) {
  check_qubit(qubit);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const std::size_t stride = std::size_t{1} << qubit;
  const std::size_t n = amps_.size();
  if (axis == Axis::X) {
    const Amplitude mis{0.0, -s};
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i0 = base; i0 < base + stride; ++i0) {
        const Amplitude a0 = amps_[i0], a1 = amps_[i0 + stride];
        amps_[i0] = c * a0 + mis * a1;
        amps_[i0 + stride] = mis * a0 + c * a1;
      }
    }
  } else {
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i0 = base; i0 < base + stride; ++i0) {
        const Amplitude a0 = amps_[i0], a1 = amps_[i0 + stride];
        amps_[i0] = c * a0 - s * a1;
        amps_[i0 + stride] = s * a0 + c * a1;
      }
    }
  }
}

void StateVector::apply_pauli(Axis axis, int qubit) {
  check_qubit(qubit);
  const std::size_t stride = std::size_t{1} << qubit;
  const std::size_t n = amps_.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i0 = base; i0 < base + stride; ++i0) {
      const Amplitude a0 = amps_[i0], a1 = amps_[i0 + stride];
      if (axis == Axis::X) {
        amps_[i0] = a1;
        amps_[i0 + stride] = a0;
      } else {
        amps_[i0] = -kI * a1;
        amps_[i0 + stride] = kI * a0;
      }
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("cnot: control and target must differ");
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }
}

double StateVector::expectation_z(int qubit) const {
  check_qubit(qubit);
  const std::size_t bit = std::size_t{1} << qubit;
  double acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    acc += (i & bit) ? -p : p;
  }
  return acc;
}

std::vector<double> StateVector::expectations_z() const {
  std::vector<double> out(static_cast<std::size_t>(num_qubits_), 0.0);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    for (int q = 0; q < num_qubits_; ++q) out[q] += ((i >> q) & 1U) ? -p : p;
  }
  return out;
}

Amplitude StateVector::inner(const StateVector& other) const {
  if (other.amps_.size() != amps_.size()) throw std::invalid_argument("inner: size mismatch");
  Amplitude acc{0.0, 0.0};
  for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * other.amps_[i];
  return acc;
}

StateVector zero_state(int num_qubits) { return StateVector(num_qubits); }

StateVector apply_rotation(StateVector s, Axis axis, int qubit, double theta) {
  s.apply_rotation(axis, qubit, theta);
  return s;
}

StateVector apply_cnot(StateVector s, int control, int target) {
  s.apply_cnot(control, target);
  return s;
}

StateVector angle_encode(std::span<const double> x) {
  const int q = static_cast<int>(x.size());
  if (q < 1 || q > kMaxQubits) throw std::invalid_argument("angle_encode: bad input length");
  std::vector<Amplitude> amps(std::size_t{1} << q, Amplitude{1.0, 0.0});
  for (int k = 0; k < q; ++k) {
    const Amplitude zero{std::cos(x[k]), 0.0};
    const Amplitude one{0.0, std::sin(x[k])};
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= ((i >> k) & 1U) ? one : zero;
  }
  return StateVector::from_amplitudes(std::move(amps));
}

std::vector<CnotPair> make_entangler(int num_qubits, EntanglerKind kind) {
  std::vector<CnotPair> pairs;
  for (int i = 0; i + 1 < num_qubits; ++i) pairs.push_back({i, i + 1});
  if (kind == EntanglerKind::Ring && num_qubits > 2) pairs.push_back({num_qubits - 1, 0});
  return pairs;
}

CircuitSpec CircuitSpec::make(int num_qubits, int layers, EntanglerKind kind,
                              std::vector<Axis> rotations) {
  CircuitSpec spec;
  spec.num_qubits = num_qubits;
  spec.layers = layers;
  spec.rotations = std::move(rotations);
  spec.entangler_kind = kind;
  spec.entangler = make_entangler(num_qubits, kind);
  spec.validate();
  return spec;
}

void CircuitSpec::validate() const {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("circuit: qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
  if (layers < 0) throw std::invalid_argument("circuit: layer count must be non-negative");
  for (const auto& p : entangler) {
    if (p.control < 0 || p.control >= num_qubits || p.target < 0 || p.target >= num_qubits) {
      throw std::invalid_argument("circuit: CNOT qubit index out of range");
    }
    if (p.control == p.target) throw std::invalid_argument("circuit: CNOT control == target");
  }
}

std::string to_string(EntanglerKind kind) { return kind == EntanglerKind::Ring ? "ring" : "chain"; }

EntanglerKind parse_entangler(const std::string& name) {
  if (name == "chain") return EntanglerKind::Chain;
  if (name == "ring") return EntanglerKind::Ring;
  throw std::invalid_argument("unknown entangler '" + name + "' (expected chain or ring)");
}

std::string to_string(Axis axis) { return axis == Axis::X ? "X" : "Y"; }

Axis parse_axis(const std::string& name) {
  if (name == "X" || name == "x") return Axis::X;
  if (name == "Y" || name == "y") return Axis::Y;
  throw std::invalid_argument("unknown rotation axis '" + name + "' (expected X or Y)");
}

StateVector prepare_state(std::span<const double> x, const CircuitSpec& spec,
                          std::span<const double> w) {
  check_shapes(x, spec, w);
  StateVector s = angle_encode(x);
  std::size_t p = 0;
  for (int layer = 0; layer < spec.layers; ++layer) {
    for (Axis axis : spec.rotations) {
      for (int q = 0; q < spec.num_qubits; ++q) s.apply_rotation(axis, q, w[p++]);
    }
    for (const auto& c : spec.entangler) s.apply_cnot(c.control, c.target);
  }
  return s;
}

std::vector<double> run_vqc(std::span<const double> x, const CircuitSpec& spec,
                            std::span<const double> w) {
  return prepare_state(x, spec, w).expectations_z();
}

VqcGradient param_shift_grad(std::span<const double> x, const CircuitSpec& spec,
                             std::span<const double> w, std::span<const double> upstream) {
  check_shapes(x, spec, w);
  if (upstream.size() != x.size()) throw std::invalid_argument("vqc: upstream length mismatch");
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  constexpr double kQuarterPi = std::numbers::pi / 4.0;

  VqcGradient g;
  g.w.resize(w.size());
  std::vector<double> shifted(w.begin(), w.end());
  for (std::size_t k = 0; k < w.size(); ++k) {
    shifted[k] = w[k] + kHalfPi;
    const auto plus = run_vqc(x, spec, shifted);
    shifted[k] = w[k] - kHalfPi;
    const auto minus = run_vqc(x, spec, shifted);
    shifted[k] = w[k];
    g.w[k] = 0.5 * weighted_sum(upstream, plus, minus);
  }

  // Encoding of x_i is RX(-2 x_i): shifting the RX angle by +-pi/2 moves
  // x_i by -+pi/4, and the chain factor -2 cancels the 1/2 of the rule.
  g.x.resize(x.size());
  std::vector<double> xs(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xs[i] = x[i] + kQuarterPi;
    const auto plus = run_vqc(xs, spec, w);
    xs[i] = x[i] - kQuarterPi;
    const auto minus = run_vqc(xs, spec, w);
    xs[i] = x[i];
    g.x[i] = weighted_sum(upstream, plus, minus);
  }
  return g;
}

VqcGradient adjoint_grad(std::span<const double> x, const CircuitSpec& spec,
                         std::span<const double> w, std::span<const double> upstream) {
  check_shapes(x, spec, w);
  if (upstream.size() != x.size()) throw std::invalid_argument("vqc: upstream length mismatch");

  StateVector psi = prepare_state(x, spec, w);

  // lambda = H psi with H = sum_i upstream_i Z_i (diagonal).
  std::vector<Amplitude> lam_amps(psi.amplitudes().begin(), psi.amplitudes().end());
  for (std::size_t i = 0; i < lam_amps.size(); ++i) {
    double h = 0.0;
    for (int q = 0; q < spec.num_qubits; ++q) h += ((i >> q) & 1U) ? -upstream[q] : upstream[q];
    lam_amps[i] *= h;
  }
  StateVector lambda = StateVector::from_amplitudes(std::move(lam_amps));
  StateVector scratch = psi;

  // d<H>/d(theta) for exp(-i theta G / 2) = Im <lambda| G |psi> at the gate output.
  auto generator_term = [&](Axis axis, int q) {
    scratch = psi;
    scratch.apply_pauli(axis, q);
    return lambda.inner(scratch).imag();
  };

  VqcGradient g;
  g.w.assign(w.size(), 0.0);
  std::size_t p = w.size();
  for (int layer = spec.layers - 1; layer >= 0; --layer) {
    for (auto it = spec.entangler.rbegin(); it != spec.entangler.rend(); ++it) {
      psi.apply_cnot(it->control, it->target);
      lambda.apply_cnot(it->control, it->target);
    }
    for (auto axis_it = spec.rotations.rbegin(); axis_it != spec.rotations.rend(); ++axis_it) {
      for (int q = spec.num_qubits - 1; q >= 0; --q) {
        --p;
        g.w[p] = generator_term(*axis_it, q);
        psi.apply_rotation(*axis_it, q, -w[p]);
        lambda.apply_rotation(*axis_it, q, -w[p]);
      }
    }
  }

  // Encoding gates RX(-2 x_q) commute with each other; the -2 is the chain factor.
  g.x.assign(x.size(), 0.0);
  for (int q = spec.num_qubits - 1; q >= 0; --q) {
    g.x[q] = -2.0 * generator_term(Axis::X, q);
    psi.apply_rotation(Axis::X, q, 2.0 * x[q]);
    lambda.apply_rotation(Axis::X, q, 2.0 * x[q]);
  }
  return g;
}

}  // namespace qfraud
