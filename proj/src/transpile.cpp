#include <cmath>
#include <complex>

#include "star/circuit.hpp"

namespace star {

bool operator==(const Gate& a, const Gate& b) {
  if (a.kind != b.kind) return false;
  if (a.is_cnot()) return a.q0 == b.q0 && a.q1 == b.q1;
  return a.q0 == b.q0 && angles_equal(a.angle, b.angle);
}

long Circuit::count_cnot() const {
  long n = 0;
  for (const Gate& g : gates) {
    if (g.is_cnot()) ++n;
  }
  return n;
}

long Circuit::count_analog() const {
  long n = 0;
  for (const Gate& g : gates) {
    if (g.is_rotation() && std::abs(normalize_angle(g.angle)) > kAngleTol) ++n;
  }
  return n;
}

namespace {

using cd = std::complex<double>;

struct Mat2 {
  cd m00, m01, m10, m11;
};

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

Mat2 rz_matrix(double t) {
  return {std::exp(cd(0, -t / 2)), 0.0, 0.0, std::exp(cd(0, t / 2))};
}

Mat2 rx_matrix(double t) {
  const double c = std::cos(t / 2);
  const cd s = cd(0, -std::sin(t / 2));
  return {c, s, s, c};
}

// Extracts Rz(t2) Rx(phi) Rz(t1) Euler angles (t1 applied first) and emits
// the shortest equivalent gate word. Input runs are products of Rz/Rx, so U
// is already special unitary up to rounding.
std::vector<Gate> euler_zxz(int qubit, const Mat2& u) {
  constexpr double eps = 1e-12;
  std::vector<Gate> out;
  const double ca = std::abs(u.m00);
  const double cb = std::abs(u.m01);
  if (cb <= eps) {
    // diagonal: pure Rz
    const double theta = normalize_angle(-2.0 * std::arg(u.m00));
    if (std::abs(theta) > kAngleTol) out.push_back(Gate::rz(qubit, theta));
    return out;
  }
  if (ca <= eps) {
    // anti-diagonal: Rz then Rx(pi)
    const double t1 = normalize_angle(2.0 * (std::arg(u.m01) + kPi / 2));
    if (std::abs(t1) > kAngleTol) out.push_back(Gate::rz(qubit, t1));
    out.push_back(Gate::rx(qubit, kPi));
    return out;
  }
  const double phi = 2.0 * std::atan2(cb, ca);
  const double sum = -2.0 * std::arg(u.m00);      // t2 + t1
  const double diff = -2.0 * (std::arg(u.m01) + kPi / 2);  // t2 - t1
  const double t2 = normalize_angle((sum + diff) / 2.0);
  const double t1 = normalize_angle((sum - diff) / 2.0);
  if (std::abs(t1) > kAngleTol) out.push_back(Gate::rz(qubit, t1));
  out.push_back(Gate::rx(qubit, normalize_angle(phi)));
  if (std::abs(t2) > kAngleTol) out.push_back(Gate::rz(qubit, t2));
  return out;
}

std::vector<Gate> fuse_run(int qubit, const std::vector<Gate>& run) {
  Mat2 u{1.0, 0.0, 0.0, 1.0};
  for (const Gate& g : run) {
    const Mat2 m = g.kind == GateKind::Rz ? rz_matrix(g.angle) : rx_matrix(g.angle);
    u = mul(m, u);
  }
  // renormalize the determinant drift from long products
  const cd det = u.m00 * u.m11 - u.m01 * u.m10;
  const cd scale = std::sqrt(det);
  if (std::abs(scale) > 1e-12) {
    u.m00 /= scale;
    u.m01 /= scale;
    u.m10 /= scale;
    u.m11 /= scale;
  }
  return euler_zxz(qubit, u);
}

}  // namespace

Circuit rewrite_to_basis(const Circuit& circuit) {
  Circuit out;
  out.n_qubits = circuit.n_qubits;
  out.source_name = circuit.source_name;
  out.gates.reserve(circuit.gates.size());
  for (const Gate& g : circuit.gates) {
    if (g.is_cnot()) {
      out.gates.push_back(g);
    } else if (g.kind == GateKind::Rz) {
      out.gates.push_back(Gate::rz(g.q0, g.angle));
    } else {
      out.gates.push_back(Gate::rx(g.q0, g.angle));
    }
  }
  return out;
}

Circuit fuse_single_qubit(const Circuit& circuit) {
  Circuit out;
  out.n_qubits = circuit.n_qubits;
  out.source_name = circuit.source_name;
  std::vector<std::vector<Gate>> runs(static_cast<std::size_t>(circuit.n_qubits));

  auto flush = [&](int q) {
    auto& run = runs[static_cast<std::size_t>(q)];
    if (run.empty()) return;
    for (const Gate& g : fuse_run(q, run)) out.gates.push_back(g);
    run.clear();
  };

  for (const Gate& g : circuit.gates) {
    if (g.is_rotation()) {
      runs[static_cast<std::size_t>(g.q0)].push_back(g);
    } else {
      flush(g.control());
      flush(g.target());
      out.gates.push_back(g);
    }
  }
  for (int q = 0; q < circuit.n_qubits; ++q) flush(q);
  return out;
}

}  // namespace star
