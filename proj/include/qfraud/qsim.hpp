#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qfraud {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 20;

enum class Axis { X, Y };

/// Dense 2^q amplitude register. Qubit i is bit i of the basis index.
///
/// Gates act in place with stride arithmetic; no 2^q x 2^q matrices are built.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits (1..kMaxQubits).
  explicit StateVector(int num_qubits);

  /// Takes ownership of `amps`; its size must be a power of two in range.
  static StateVector from_amplitudes(std::vector<Amplitude> amps);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

  /// RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2).
  void apply_rotation(Axis axis, int qubit, double theta);
  void apply_cnot(int control, int target);
  /// Applies the bare Pauli X or Y (the rotation generator).
  void apply_pauli(Axis axis, int qubit);

  /// <psi| Z_qubit |psi>.
  double expectation_z(int qubit) const;
  /// All single-qubit Z expectations in one pass.
  std::vector<double> expectations_z() const;

  /// <this | other>.
  Amplitude inner(const StateVector& other) const;

 private:
  StateVector() = default;
  void check_qubit(int qubit) const;

  int num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

StateVector zero_state(int num_qubits);
StateVector apply_rotation(StateVector s, Axis axis, int qubit, double theta);
StateVector apply_cnot(StateVector s, int control, int target);

/// Product state with qubit i in cos(x_i)|0> + i sin(x_i)|1>, which equals
/// RX(-2 x_i)|0>.
StateVector angle_encode(std::span<const double> x);

enum class EntanglerKind { Chain, Ring };

struct CnotPair {
  int control = 0;
  int target = 0;
  friend bool operator==(const CnotPair&, const CnotPair&) = default;
};

/// Layered ansatz. Each layer applies, for every axis in `rotations`, that
/// rotation on every qubit (one parameter each), then the CNOT block.
struct CircuitSpec {
  int num_qubits = 6;
  int layers = 1;
  std::vector<Axis> rotations{Axis::Y, Axis::X};
  EntanglerKind entangler_kind = EntanglerKind::Chain;
  std::vector<CnotPair> entangler;

  static CircuitSpec make(int num_qubits, int layers, EntanglerKind kind = EntanglerKind::Chain,
                          std::vector<Axis> rotations = {Axis::Y, Axis::X});

  /// Parameters are laid out layer-major, then rotation axis, then qubit.
  std::size_t num_params() const {
    return static_cast<std::size_t>(layers) * rotations.size() *
           static_cast<std::size_t>(num_qubits);
  }

  void validate() const;
};

std::vector<CnotPair> make_entangler(int num_qubits, EntanglerKind kind);

std::string to_string(EntanglerKind kind);
EntanglerKind parse_entangler(const std::string& name);
std::string to_string(Axis axis);
Axis parse_axis(const std::string& name);

/// Final state after encoding `x` and applying every layer with angles `w`.
StateVector prepare_state(std::span<const double> x, const CircuitSpec& spec,
                          std::span<const double> w);

/// <Z_i> for every qubit of the prepared state.
std::vector<double> run_vqc(std::span<const double> x, const CircuitSpec& spec,
                            std::span<const double> w);

/// Gradients of sum_i upstream_i <Z_i> with respect to the circuit angles
/// and the encoded inputs.
struct VqcGradient {
  std::vector<double> w;
  std::vector<double> x;
};

/// Two-term parameter-shift rule. Costs 2 (|w| + q) circuit evaluations.
VqcGradient param_shift_grad(std::span<const double> x, const CircuitSpec& spec,
                             std::span<const double> w, std::span<const double> upstream);

/// Adjoint (reverse-mode) differentiation: one forward pass plus one
/// backward sweep regardless of parameter count. Same result as
/// param_shift_grad up to rounding.
VqcGradient adjoint_grad(std::span<const double> x, const CircuitSpec& spec,
                         std::span<const double> w, std::span<const double> upstream);

}  // namespace qfraud
