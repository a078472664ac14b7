#pragma once

#include <cstdint>
#include <vector>

#include "star/topology.hpp"

namespace star {

enum class QuboStage { First, Second };

struct QuboVar {
  int id = 0;
  int qubit = 0;
  Spot spot;
  QuboStage stage = QuboStage::First;
};

/// Spot-allocation objective. Coefficients already carry the penalty weights,
/// so the objective is constant + sum(linear) + sum(quadratic); interaction
/// degree never exceeds 2.
struct QuboProblem {
  std::vector<QuboVar> vars;
  std::vector<double> linear;
  std::vector<std::tuple<int, int, double>> quadratic;  // (k, l, coeff), k < l
  double constant = 0.0;
  double a = 4.0;
  double b = 2.0;

  int size() const { return static_cast<int>(vars.size()); }
};

struct Assignment {
  std::vector<char> values;  // 0/1 per var id
  double objective = 0.0;

  std::vector<int> selected() const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(values.size()); ++i) {
      if (values[static_cast<std::size_t>(i)]) ids.push_back(i);
    }
    return ids;
  }
};

/// A qubit that wants a resource-state creation trial this timestep, tagged
/// with the measurement axis of its pending rotation.
struct RotationRequest {
  int qubit = 0;
  Axis axis = Axis::Z;
};

/// One variable per (qubit, free axis neighbor). The objective rewards every
/// selected trial, penalizes two trials on one spot (weight a) and rewards
/// covering each qubit at least once (weight b).
QuboProblem build_first_stage(const std::vector<RotationRequest>& requests,
                              const Topology& topo, const OccupancyGrid& occupied,
                              double a = 4.0, double b = 2.0);

/// Distance-2 expansion: one variable per (qubit, free spot adjacent to one of
/// the qubit's chosen first-stage spots), excluding every spot the first stage
/// selected. Only the same-spot penalty applies; coverage is already handled
/// by the first stage.
QuboProblem build_second_stage(const std::vector<RotationRequest>& requests,
                               const Topology& topo, const OccupancyGrid& occupied,
                               const QuboProblem& first,
                               const Assignment& first_choice, double a = 4.0);

double evaluate(const QuboProblem& problem, const std::vector<char>& values);

/// Zeroes the higher-id variable of every same-spot conflict.
void repair(const QuboProblem& problem, std::vector<char>& values);

/// Exact minimum with ties broken toward the lexicographically smallest
/// valuation. Small problems are enumerated directly; larger ones are split
/// into independent components first and annealed only when a component is
/// itself too large. The result always satisfies the same-spot constraint.
Assignment solve(const QuboProblem& problem, std::uint64_t seed);

/// Plain exhaustive enumeration. Throws when the problem has more than 25
/// variables.
Assignment solve_exhaustive(const QuboProblem& problem);

struct AnnealParams {
  int restarts = 4;
  int sweeps_per_var = 250;
  int min_sweeps = 3000;
  double t0_scale = 2.0;
  double t_end = 1e-3;
};

/// Simulated annealing with geometric cooling and restarts, post-repaired.
Assignment solve_annealed(const QuboProblem& problem, std::uint64_t seed,
                          const AnnealParams& params = {});

}  // namespace star
