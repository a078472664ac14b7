#include <fstream>
#include <sstream>

#include "json.hpp"
#include "star/circuit.hpp"

namespace star {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string circuit_to_json(const Circuit& circuit) {
  ordered_json j;
  j["name"] = circuit.source_name;
  j["n_qubits"] = circuit.n_qubits;
  ordered_json gates = ordered_json::array();
  for (const Gate& g : circuit.gates) {
    ordered_json e;
    switch (g.kind) {
      case GateKind::Cnot:
        e["kind"] = "cnot";
        e["qubits"] = {g.control(), g.target()};
        break;
      case GateKind::Rz:
        e["kind"] = "rz";
        e["qubits"] = {g.qubit()};
        e["angle"] = g.angle;
        break;
      case GateKind::Rx:
        e["kind"] = "rx";
        e["qubits"] = {g.qubit()};
        e["angle"] = g.angle;
        break;
    }
    gates.push_back(std::move(e));
  }
  j["gates"] = std::move(gates);
  return j.dump(2) + "\n";
}

Circuit circuit_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Circuit c;
  c.source_name = j.value("name", "");
  c.n_qubits = j.at("n_qubits").get<int>();
  for (const auto& e : j.at("gates")) {
    const std::string kind = e.at("kind").get<std::string>();
    const auto qubits = e.at("qubits").get<std::vector<int>>();
    for (int q : qubits) {
      if (q < 0 || q >= c.n_qubits) {
        throw std::runtime_error("circuit json: qubit index out of range");
      }
    }
    if (kind == "cnot") {
      if (qubits.size() != 2 || qubits[0] == qubits[1]) {
        throw std::runtime_error("circuit json: bad cnot operands");
      }
      c.gates.push_back(Gate::cnot(qubits[0], qubits[1]));
    } else if (kind == "rz" || kind == "rx") {
      if (qubits.size() != 1) {
        throw std::runtime_error("circuit json: bad rotation operands");
      }
      const double angle = e.at("angle").get<double>();
      c.gates.push_back(kind == "rz" ? Gate::rz(qubits[0], angle)
                                     : Gate::rx(qubits[0], angle));
    } else {
      throw std::runtime_error("circuit json: unknown gate kind '" + kind + "'");
    }
  }
  return c;
}

Circuit circuit_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return circuit_from_json(ss.str());
}

Circuit load_circuit(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return circuit_from_json_file(path);
  }
  return fuse_single_qubit(rewrite_to_basis(parse_qasm_file(path)));
}

}  // namespace star
