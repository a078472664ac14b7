#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "star/angles.hpp"

namespace star {

enum class GateKind { Cnot, Rz, Rx };

struct Gate {
  GateKind kind = GateKind::Rz;
  int q0 = 0;          // control for CNOT, acted qubit otherwise
  int q1 = -1;         // target for CNOT, unused otherwise
  double angle = 0.0;  // rotation angle, kept normalized to (-pi, pi]

  static Gate cnot(int control, int target) {
    return Gate{GateKind::Cnot, control, target, 0.0};
  }
  static Gate rz(int qubit, double theta) {
    return Gate{GateKind::Rz, qubit, -1, normalize_angle(theta)};
  }
  static Gate rx(int qubit, double phi) {
    return Gate{GateKind::Rx, qubit, -1, normalize_angle(phi)};
  }

  bool is_cnot() const { return kind == GateKind::Cnot; }
  bool is_rotation() const { return kind != GateKind::Cnot; }
  bool acts_on(int q) const { return q0 == q || (is_cnot() && q1 == q); }
  int control() const { return q0; }
  int target() const { return q1; }
  int qubit() const { return q0; }
};

bool operator==(const Gate& a, const Gate& b);

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::string source_name;

  long count_cnot() const;
  /// Rotations with a nonzero normalized angle.
  long count_analog() const;
};

/// One layer of the alternating CNOT ("M") / single-qubit ("S") structure.
struct Layer {
  bool is_m = false;
  std::vector<Gate> gates;
};

struct LayerDecomposition {
  std::vector<Layer> layers;  // non-empty layers, in execution order
  int n_s = 0;                // number of non-empty S layers
};

struct Densities {
  std::optional<double> analog;  // N_analog / (3 q (n_s + 1))
  std::optional<double> cnot;    // N_cnot / (n_s floor(q/2))
  long n_analog = 0;
  long n_cnot = 0;
  int n_s = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses the QASM subset (qreg, cx, rz, rx, h, x, z, s, sdg, t, tdg,
/// barrier; OPENQASM/include/creg headers and measure statements are
/// ignored). Named Clifford gates are recorded as their Rz/Rx words.
Circuit parse_qasm(const std::string& text, const std::string& source_name = "");
Circuit parse_qasm_file(const std::string& path);

/// Normalizes a circuit onto the {CNOT, Rx, Rz} basis with all angles in
/// (-pi, pi]. Idempotent.
Circuit rewrite_to_basis(const Circuit& circuit);

/// Collapses every maximal run of single-qubit gates on one qubit into at
/// most three gates Rz(t1), Rx(phi), Rz(t2) (applied in that order), equal to
/// the run's unitary up to global phase. Zero-angle gates are dropped.
Circuit fuse_single_qubit(const Circuit& circuit);

/// Greedy ASAP decomposition into alternating S and M layers.
LayerDecomposition layerize(const Circuit& circuit);

Densities densities(const Circuit& circuit);

std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);
Circuit circuit_from_json_file(const std::string& path);

/// Loads a circuit from either a .qasm source (parsed and fused) or a .json
/// circuit file.
Circuit load_circuit(const std::string& path);

}  // namespace star
