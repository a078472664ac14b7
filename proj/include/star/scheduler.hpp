#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "star/circuit.hpp"
#include "star/qubo.hpp"
#include "star/topology.hpp"

namespace star {

struct RunConfig {
  double p_cr = 0.8;       // resource-state creation success probability
  double p_cm = 0.5;       // joint-measurement success probability
  double qubo_a = 4.0;
  double qubo_b = 2.0;
  int deadlock_limit = 1000;  // consecutive no-progress timesteps before abort
  bool record_events = false;
};

enum class QubitCategory {
  Idle,
  Cnot1,
  Cnot2,
  Cnot2Rx,
  Cnot2Rz,
  Rx1,
  Rx2,
  Rx3,
  Rz1,
  Rz2,
  Rz3,
};

const char* to_string(QubitCategory c);

/// An ancilla |m_theta> patch tied to one data qubit's pending rotation.
struct ResourceState {
  Spot spot;
  int target_qubit = -1;
  Axis axis = Axis::Z;
  double angle = 0.0;
  bool ready = false;            // creation takes the cycle it was launched in
  bool moved_this_step = false;  // a moved patch is measurable from next step
};

struct Event {
  std::uint64_t t = 0;
  int phase = 0;
  std::string kind;
  int qubit = -1;
  int qubit2 = -1;
  std::vector<Spot> spots;
  std::string outcome;
};

struct SimCounters {
  std::uint64_t creation_trials = 0;     // Bernoulli(p_cr) trials only
  std::uint64_t creation_successes = 0;
  std::uint64_t clifford_creations = 0;  // deterministic Pauli-eigenstate states
  std::uint64_t measure_attempts = 0;
  std::uint64_t measure_successes = 0;
  std::uint64_t cnot_started = 0;
  std::uint64_t cnot_completed = 0;
  std::uint64_t cnot_route_failures = 0;
  std::uint64_t moves = 0;
  std::uint64_t resources_discarded = 0;
  std::uint64_t gates_completed = 0;
};

struct SimResult {
  std::uint64_t t_clock = 0;
  bool deadlocked = false;
  std::string diagnostic;
  SimCounters counters;
  std::vector<Event> events;
};

/// One stochastic trial of a circuit on a topology. Each timestep runs the
/// fixed phase order: resource movement, CNOT routing, spot allocation with
/// creation trials, joint measurements, CNOT completion.
class Simulation {
 public:
  /// Requires a validated topology whose qubit count matches the circuit.
  Simulation(const Circuit& circuit, const Topology& topo, const RunConfig& config,
             std::uint64_t seed);

  void step();
  bool done() const;
  bool deadlocked() const { return deadlocked_; }
  std::uint64_t clock() const { return t_; }

  QubitCategory category(int qubit) const;
  double rotation_angle(int qubit) const;
  int rotation_attempt(int qubit) const;
  const std::vector<ResourceState>& resources() const { return resources_; }
  const SimCounters& counters() const { return counters_; }
  const std::vector<int>& completed_gates(int qubit) const;
  std::string diagnostic() const;

  /// Every spot holds at most one of: data qubit, resource state, route
  /// segment, movement endpoint.
  bool spot_exclusivity_ok() const;

  SimResult take_result();

 private:
  struct QubitTask {
    std::vector<int> gate_ids;
    std::size_t head = 0;
    bool rotation_active = false;
    double theta_cur = 0.0;
    int attempt = 0;
  };
  struct CnotRoute {
    int gate_id = -1;
    int control = -1;
    int target = -1;
    std::vector<Spot> path;
    std::uint64_t started_at = 0;
  };

  int head_gate(int qubit) const;
  void start_head_gate(int qubit);
  void advance_queue(int qubit);
  void categorize_all();
  void discard_stale_resources();
  bool rotation_pending(int qubit, Axis* axis = nullptr) const;
  int find_resource(int qubit, bool require_adjacent) const;
  bool adjacent_to(Spot s, int qubit, Axis axis) const;
  void record(int phase, const std::string& kind, int qubit, int qubit2,
              std::vector<Spot> spots, const std::string& outcome);

  Circuit circuit_;
  Topology topo_;
  RunConfig config_;
  std::mt19937_64 rng_;

  std::vector<QubitTask> tasks_;
  std::vector<QubitCategory> categories_;
  std::vector<ResourceState> resources_;
  std::vector<CnotRoute> routes_;
  OccupancyGrid occupied_;
  std::vector<Spot> free_at_end_;
  std::vector<std::vector<int>> completed_;

  std::uint64_t t_ = 0;
  int no_progress_ = 0;
  bool deadlocked_ = false;
  SimCounters counters_;
  std::vector<Event> events_;
};

SimResult run(const Circuit& circuit, const Topology& topo, const RunConfig& config,
              std::uint64_t seed);

}  // namespace star
