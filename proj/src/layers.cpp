#include <algorithm>
#include <cstddef>

#include "star/circuit.hpp"

namespace star {

LayerDecomposition layerize(const Circuit& circuit) {
  const int n = circuit.n_qubits;
  std::vector<std::vector<int>> queue(static_cast<std::size_t>(n));
  std::vector<std::size_t> head(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < static_cast<int>(circuit.gates.size()); ++i) {
    const Gate& g = circuit.gates[static_cast<std::size_t>(i)];
    queue[static_cast<std::size_t>(g.q0)].push_back(i);
    if (g.is_cnot()) queue[static_cast<std::size_t>(g.q1)].push_back(i);
  }
  auto head_gate = [&](int q) -> int {
    const auto& qq = queue[static_cast<std::size_t>(q)];
    const std::size_t h = head[static_cast<std::size_t>(q)];
    return h < qq.size() ? qq[h] : -1;
  };

  LayerDecomposition result;
  std::size_t remaining = circuit.gates.size();
  while (remaining > 0) {
    Layer s{false, {}};
    for (int q = 0; q < n; ++q) {
      int gi;
      while ((gi = head_gate(q)) >= 0 &&
             circuit.gates[static_cast<std::size_t>(gi)].is_rotation()) {
        s.gates.push_back(circuit.gates[static_cast<std::size_t>(gi)]);
        ++head[static_cast<std::size_t>(q)];
        --remaining;
      }
    }
    if (!s.gates.empty()) {
      result.layers.push_back(std::move(s));
      ++result.n_s;
    }

    Layer m{true, {}};
    std::vector<int> picked;
    for (int q = 0; q < n; ++q) {
      const int gi = head_gate(q);
      if (gi < 0) continue;
      const Gate& g = circuit.gates[static_cast<std::size_t>(gi)];
      if (!g.is_cnot() || g.control() != q) continue;
      if (head_gate(g.target()) == gi) picked.push_back(gi);
    }
    std::sort(picked.begin(), picked.end());
    for (int gi : picked) {
      const Gate& g = circuit.gates[static_cast<std::size_t>(gi)];
      m.gates.push_back(g);
      ++head[static_cast<std::size_t>(g.control())];
      ++head[static_cast<std::size_t>(g.target())];
      --remaining;
    }
    if (!m.gates.empty()) result.layers.push_back(std::move(m));

    if (s.gates.empty() && picked.empty() && remaining > 0) {
      throw std::logic_error("layerize made no progress");
    }
  }
  return result;
}

Densities densities(const Circuit& circuit) {
  Densities d;
  const LayerDecomposition ld = layerize(circuit);
  d.n_s = ld.n_s;
  d.n_analog = circuit.count_analog();
  d.n_cnot = circuit.count_cnot();
  const int q = circuit.n_qubits;
  if (q >= 1) {
    d.analog = static_cast<double>(d.n_analog) / (3.0 * q * (d.n_s + 1));
  }
  const long cnot_slots = static_cast<long>(d.n_s) * (q / 2);
  if (cnot_slots > 0) {
    d.cnot = static_cast<double>(d.n_cnot) / static_cast<double>(cnot_slots);
  }
  return d;
}

}  // namespace star
