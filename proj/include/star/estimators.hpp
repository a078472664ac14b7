#pragma once

#include <map>
#include <optional>
#include <vector>

#include "star/circuit.hpp"
#include "star/topology.hpp"

namespace star {

struct EstimatorReport {
  double e_analog = 0.0;
  double e_cnot = 0.0;
  double e_comb = 0.0;
  double w = 0.3;
  // per-qubit open edges and rotation counts, per-pair CNOT counts and path
  // lengths
  std::vector<OpenEdges> open;
  std::vector<long> n_ops_x;
  std::vector<long> n_ops_z;
  std::map<std::pair<int, int>, long> n_cnot;
  std::map<std::pair<int, int>, int> path_length;
};

/// Sum over qubits and axes of open-edge count times rotation count.
double e_analog(const Topology& topo, const Circuit& circuit);

/// Minus the CNOT-count-weighted sum of shortest path lengths, measured on
/// the grid with only data qubits as obstacles. Requires a validated
/// topology so every used pair is routable.
double e_cnot(const Topology& topo, const Circuit& circuit);

double e_comb(const Topology& topo, const Circuit& circuit, double w = 0.3);

EstimatorReport estimator_report(const Topology& topo, const Circuit& circuit,
                                 double w = 0.3);

/// Sample Pearson correlation; empty when either side has zero variance.
std::optional<double> pearson_r(const std::vector<double>& xs,
                                const std::vector<double>& ys);

}  // namespace star
