#include <cmath>
#include <stdexcept>

#include "star/estimators.hpp"

namespace star {

namespace {

void count_rotations(const Circuit& circuit, std::vector<long>& nx,
                     std::vector<long>& nz) {
  nx.assign(static_cast<std::size_t>(circuit.n_qubits), 0);
  nz.assign(static_cast<std::size_t>(circuit.n_qubits), 0);
  for (const Gate& g : circuit.gates) {
    if (!g.is_rotation()) continue;
    if (std::abs(normalize_angle(g.angle)) <= kAngleTol) continue;
    if (g.kind == GateKind::Rx) {
      ++nx[static_cast<std::size_t>(g.qubit())];
    } else {
      ++nz[static_cast<std::size_t>(g.qubit())];
    }
  }
}

}  // namespace

double e_analog(const Topology& topo, const Circuit& circuit) {
  if (topo.n_qubits() != circuit.n_qubits) {
    throw std::invalid_argument("estimator: qubit counts differ");
  }
  std::vector<long> nx, nz;
  count_rotations(circuit, nx, nz);
  double total = 0.0;
  for (int q = 0; q < topo.n_qubits(); ++q) {
    const OpenEdges e = open_edges(topo, q);
    total += static_cast<double>(e.x_open) * nx[static_cast<std::size_t>(q)];
    total += static_cast<double>(e.z_open) * nz[static_cast<std::size_t>(q)];
  }
  return total;
}

double e_cnot(const Topology& topo, const Circuit& circuit) {
  if (topo.n_qubits() != circuit.n_qubits) {
    throw std::invalid_argument("estimator: qubit counts differ");
  }
  std::map<std::pair<int, int>, long> counts;
  for (const Gate& g : circuit.gates) {
    if (g.is_cnot()) ++counts[{g.control(), g.target()}];
  }
  const OccupancyGrid empty(topo.width(), topo.height());
  double total = 0.0;
  for (const auto& [pair, n] : counts) {
    const auto path = route_cnot(topo, empty, pair.first, pair.second);
    if (!path) {
      throw std::runtime_error("estimator: no route between qubits " +
                               std::to_string(pair.first) + " and " +
                               std::to_string(pair.second));
    }
    total += static_cast<double>(n) * static_cast<double>(path->size());
  }
  return -total;
}

double e_comb(const Topology& topo, const Circuit& circuit, double w) {
  return e_analog(topo, circuit) + w * e_cnot(topo, circuit);
}

EstimatorReport estimator_report(const Topology& topo, const Circuit& circuit,
                                 double w) {
  EstimatorReport r;
  r.w = w;
  count_rotations(circuit, r.n_ops_x, r.n_ops_z);
  for (int q = 0; q < topo.n_qubits(); ++q) r.open.push_back(open_edges(topo, q));
  for (const Gate& g : circuit.gates) {
    if (g.is_cnot()) ++r.n_cnot[{g.control(), g.target()}];
  }
  const OccupancyGrid empty(topo.width(), topo.height());
  for (const auto& [pair, n] : r.n_cnot) {
    const auto path = route_cnot(topo, empty, pair.first, pair.second);
    if (!path) {
      throw std::runtime_error("estimator: no route between qubits " +
                               std::to_string(pair.first) + " and " +
                               std::to_string(pair.second));
    }
    r.path_length[pair] = static_cast<int>(path->size());
  }
  r.e_analog = e_analog(topo, circuit);
  double cn = 0.0;
  for (const auto& [pair, n] : r.n_cnot) {
    cn -= static_cast<double>(n) * r.path_length[pair];
  }
  r.e_cnot = cn;
  r.e_comb = r.e_analog + w * r.e_cnot;
  return r;
}

std::optional<double> pearson_r(const std::vector<double>& xs,
                                const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("pearson_r needs two samples of equal length >= 2");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace star
