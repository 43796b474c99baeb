#pragma once

// Dense-matrix circuit reference: every gate is expanded to a full
// 2^q x 2^q unitary via Kronecker products and multiplied out. Only
// practical for q <= 4.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "qfraud/qsim.hpp"

namespace oracle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat rotation_2x2(qfraud::Axis axis, double theta) {
  const std::complex<double> I(0.0, 1.0);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  CMat m(2, 2);
  if (axis == qfraud::Axis::X) {
    m << c, -I * s, -I * s, c;
  } else {
    m << c, -s, s, c;
  }
  return m;
}

// Qubit k is bit k of the basis index, so it is the k-th factor from the right.
inline CMat on_qubit(const CMat& u, int k, int q) {
  CMat out = CMat::Identity(1, 1);
  for (int wire = q - 1; wire >= 0; --wire) {
    out = kron(out, wire == k ? u : CMat(CMat::Identity(2, 2)));
  }
  return out;
}

inline CMat cnot_matrix(int control, int target, int q) {
  const Eigen::Index dim = Eigen::Index(1) << q;
  CMat m = CMat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index out = b;
    if ((b >> control) & 1) out ^= (Eigen::Index(1) << target);
    m(out, b) = 1.0;
  }
  return m;
}

inline CMat z_on(int k, int q) {
  CMat z(2, 2);
  z << 1, 0, 0, -1;
  return on_qubit(z, k, q);
}

inline CVec encode(const std::vector<double>& x) {
  const std::complex<double> I(0.0, 1.0);
  CVec v = CVec::Ones(1);
  for (int k = static_cast<int>(x.size()) - 1; k >= 0; --k) {
    CVec f(2);
    f << std::cos(x[k]), I * std::sin(x[k]);
    CMat a = v, b = f;
    v = kron(a, b);
  }
  return v;
}

inline CVec prepare(const std::vector<double>& x, const qfraud::CircuitSpec& spec,
                    const std::vector<double>& w) {
  const int q = spec.num_qubits;
  CVec psi = encode(x);
  std::size_t k = 0;
  for (int l = 0; l < spec.layers; ++l) {
    for (qfraud::Axis axis : spec.rotations) {
      for (int i = 0; i < q; ++i) psi = on_qubit(rotation_2x2(axis, w[k++]), i, q) * psi;
    }
    for (const auto& p : spec.entangler) psi = cnot_matrix(p.control, p.target, q) * psi;
  }
  return psi;
}

inline std::vector<double> expectations(const CVec& psi, int q) {
  std::vector<double> out;
  for (int i = 0; i < q; ++i) out.push_back((psi.adjoint() * z_on(i, q) * psi)(0, 0).real());
  return out;
}

inline std::vector<double> run_vqc(const std::vector<double>& x, const qfraud::CircuitSpec& spec,
                                   const std::vector<double>& w) {
  return expectations(prepare(x, spec, w), spec.num_qubits);
}

}  // namespace oracle
