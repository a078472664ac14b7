#include <algorithm>
#include <sstream>

#include "star/rng.hpp"
#include "star/scheduler.hpp"

namespace star {

const char* to_string(QubitCategory c) {
  switch (c) {
    case QubitCategory::Idle: return "IDLE";
    case QubitCategory::Cnot1: return "CNOT1";
    case QubitCategory::Cnot2: return "CNOT2";
    case QubitCategory::Cnot2Rx: return "CNOT2_RX";
    case QubitCategory::Cnot2Rz: return "CNOT2_RZ";
    case QubitCategory::Rx1: return "RX1";
    case QubitCategory::Rx2: return "RX2";
    case QubitCategory::Rx3: return "RX3";
    case QubitCategory::Rz1: return "RZ1";
    case QubitCategory::Rz2: return "RZ2";
    case QubitCategory::Rz3: return "RZ3";
  }
  return "?";
}

Simulation::Simulation(const Circuit& circuit, const Topology& topo,
                       const RunConfig& config, std::uint64_t seed)
    : circuit_(circuit),
      topo_(topo),
      config_(config),
      rng_(seed),
      occupied_(topo.width(), topo.height()) {
  if (circuit_.n_qubits != topo_.n_qubits()) {
    throw std::invalid_argument("circuit and topology disagree on qubit count");
  }
  if (!validate(topo_).ok()) {
    throw std::invalid_argument("topology does not satisfy the mapping constraints");
  }
  tasks_.resize(static_cast<std::size_t>(circuit_.n_qubits));
  completed_.resize(static_cast<std::size_t>(circuit_.n_qubits));
  for (int i = 0; i < static_cast<int>(circuit_.gates.size()); ++i) {
    const Gate& g = circuit_.gates[static_cast<std::size_t>(i)];
    tasks_[static_cast<std::size_t>(g.q0)].gate_ids.push_back(i);
    if (g.is_cnot()) tasks_[static_cast<std::size_t>(g.q1)].gate_ids.push_back(i);
  }
  for (int q = 0; q < circuit_.n_qubits; ++q) start_head_gate(q);
  categorize_all();
}

int Simulation::head_gate(int qubit) const {
  const QubitTask& task = tasks_[static_cast<std::size_t>(qubit)];
  return task.head < task.gate_ids.size()
             ? task.gate_ids[task.head]
             : -1;
}

void Simulation::start_head_gate(int qubit) {
  QubitTask& task = tasks_[static_cast<std::size_t>(qubit)];
  task.rotation_active = false;
  task.theta_cur = 0.0;
  task.attempt = 0;
  while (true) {
    const int gid = head_gate(qubit);
    if (gid < 0) return;
    const Gate& g = circuit_.gates[static_cast<std::size_t>(gid)];
    if (g.is_cnot()) return;
    const double theta = normalize_angle(g.angle);
    const AngleClass cls = classify_angle(theta);
    if (cls == AngleClass::Identity || cls == AngleClass::Pauli) {
      // absorbed into the tracked Pauli/Clifford frame at zero cost
      completed_[static_cast<std::size_t>(qubit)].push_back(gid);
      ++counters_.gates_completed;
      ++task.head;
      record(0, "frame_gate", qubit, -1, {}, "ok");
      continue;
    }
    task.rotation_active = true;
    task.theta_cur = theta;
    task.attempt = 1;
    return;
  }
}

void Simulation::advance_queue(int qubit) {
  QubitTask& task = tasks_[static_cast<std::size_t>(qubit)];
  completed_[static_cast<std::size_t>(qubit)].push_back(head_gate(qubit));
  ++task.head;
  start_head_gate(qubit);
}

bool Simulation::rotation_pending(int qubit, Axis* axis) const {
  const QubitTask& task = tasks_[static_cast<std::size_t>(qubit)];
  if (!task.rotation_active) return false;
  if (axis) {
    const Gate& g = circuit_.gates[static_cast<std::size_t>(head_gate(qubit))];
    *axis = g.kind == GateKind::Rz ? Axis::Z : Axis::X;
  }
  return true;
}

bool Simulation::adjacent_to(Spot s, int qubit, Axis axis) const {
  const Spot q = topo_.spot_of(qubit);
  if (axis == Axis::Z) return s.x == q.x && std::abs(s.y - q.y) == 1;
  return s.y == q.y && std::abs(s.x - q.x) == 1;
}

int Simulation::find_resource(int qubit, bool require_adjacent) const {
  Axis axis;
  if (!rotation_pending(qubit, &axis)) return -1;
  const QubitTask& task = tasks_[static_cast<std::size_t>(qubit)];
  int best = -1;
  auto rank = [&](int idx) {
    const ResourceState& r = resources_[static_cast<std::size_t>(idx)];
    return std::tuple<int, int, int>(adjacent_to(r.spot, qubit, axis) ? 0 : 1,
                                     r.spot.y, r.spot.x);
  };
  for (int i = 0; i < static_cast<int>(resources_.size()); ++i) {
    const ResourceState& r = resources_[static_cast<std::size_t>(i)];
    if (r.target_qubit != qubit || !r.ready || r.moved_this_step) continue;
    if (r.axis != axis || !angles_equal(r.angle, task.theta_cur)) continue;
    if (require_adjacent && !adjacent_to(r.spot, qubit, axis)) continue;
    if (best < 0 || rank(i) < rank(best)) best = i;
  }
  return best;
}

void Simulation::categorize_all() {
  categories_.assign(static_cast<std::size_t>(circuit_.n_qubits), QubitCategory::Idle);
  for (int q = 0; q < circuit_.n_qubits; ++q) {
    const int gid = head_gate(q);
    if (gid < 0) continue;
    const Gate& g = circuit_.gates[static_cast<std::size_t>(gid)];
    if (g.is_cnot()) {
      const CnotRoute* route = nullptr;
      for (const CnotRoute& r : routes_) {
        if (r.gate_id == gid) route = &r;
      }
      if (route && t_ > 0 && route->started_at == t_ - 1) {
        // second timestep of the CNOT; look ahead past frame gates
        QubitCategory cat = QubitCategory::Cnot2;
        const QubitTask& task = tasks_[static_cast<std::size_t>(q)];
        for (std::size_t i = task.head + 1; i < task.gate_ids.size(); ++i) {
          const Gate& n = circuit_.gates[static_cast<std::size_t>(task.gate_ids[i])];
          if (n.is_cnot()) break;
          const AngleClass cls = classify_angle(n.angle);
          if (cls == AngleClass::Identity || cls == AngleClass::Pauli) continue;
          cat = n.kind == GateKind::Rz ? QubitCategory::Cnot2Rz : QubitCategory::Cnot2Rx;
          break;
        }
        categories_[static_cast<std::size_t>(q)] = cat;
      } else if (!route) {
        const int partner = g.control() == q ? g.target() : g.control();
        categories_[static_cast<std::size_t>(q)] =
            head_gate(partner) == gid ? QubitCategory::Cnot1 : QubitCategory::Idle;
      } else {
        categories_[static_cast<std::size_t>(q)] = QubitCategory::Cnot1;
      }
      continue;
    }
    Axis axis;
    if (!rotation_pending(q, &axis)) continue;
    QubitCategory cat;
    if (find_resource(q, true) >= 0) {
      cat = axis == Axis::Z ? QubitCategory::Rz3 : QubitCategory::Rx3;
    } else if (find_resource(q, false) >= 0) {
      cat = axis == Axis::Z ? QubitCategory::Rz2 : QubitCategory::Rx2;
    } else {
      cat = axis == Axis::Z ? QubitCategory::Rz1 : QubitCategory::Rx1;
    }
    categories_[static_cast<std::size_t>(q)] = cat;
  }
}

void Simulation::discard_stale_resources() {
  if (resources_.empty()) return;
  // one kept resource per qubit: the pending rotation's angle on the right
  // axis, adjacent spots preferred
  std::vector<int> keeper(static_cast<std::size_t>(circuit_.n_qubits), -1);
  std::vector<char> keep(resources_.size(), 0);
  auto rank = [&](int idx, Axis axis) {
    const ResourceState& r = resources_[static_cast<std::size_t>(idx)];
    return std::tuple<int, int, int>(
        adjacent_to(r.spot, r.target_qubit, axis) ? 0 : 1, r.spot.y, r.spot.x);
  };
  for (int i = 0; i < static_cast<int>(resources_.size()); ++i) {
    const ResourceState& r = resources_[static_cast<std::size_t>(i)];
    Axis axis;
    if (!rotation_pending(r.target_qubit, &axis)) continue;
    const QubitTask& task = tasks_[static_cast<std::size_t>(r.target_qubit)];
    if (r.axis != axis || !angles_equal(r.angle, task.theta_cur)) continue;
    int& k = keeper[static_cast<std::size_t>(r.target_qubit)];
    if (k < 0 || rank(i, axis) < rank(k, axis)) k = i;
  }
  for (int k : keeper) {
    if (k >= 0) keep[static_cast<std::size_t>(k)] = 1;
  }
  std::vector<ResourceState> kept;
  kept.reserve(resources_.size());
  for (int i = 0; i < static_cast<int>(resources_.size()); ++i) {
    if (keep[static_cast<std::size_t>(i)]) {
      kept.push_back(resources_[static_cast<std::size_t>(i)]);
    } else {
      occupied_.release(resources_[static_cast<std::size_t>(i)].spot);
      ++counters_.resources_discarded;
      record(0, "discard", resources_[static_cast<std::size_t>(i)].target_qubit, -1,
             {resources_[static_cast<std::size_t>(i)].spot}, "stale");
    }
  }
  resources_ = std::move(kept);
}

void Simulation::step() {
  discard_stale_resources();
  categorize_all();
  bool progress = false;
  const std::uint64_t now = t_;

  // (1) move ready resources to an adjacent spot
  for (int q = 0; q < circuit_.n_qubits; ++q) {
    const QubitCategory cat = categories_[static_cast<std::size_t>(q)];
    if (cat != QubitCategory::Rx2 && cat != QubitCategory::Rz2) continue;
    const Axis axis = cat == QubitCategory::Rz2 ? Axis::Z : Axis::X;
    const int ri = find_resource(q, false);
    if (ri < 0) continue;
    ResourceState& r = resources_[static_cast<std::size_t>(ri)];
    for (Spot d : axis_neighbors(topo_, q, axis)) {
      if (topo_.qubit_at(d) >= 0 || occupied_.test(d)) continue;
      if (l1_distance(d, r.spot) != 1) continue;
      occupied_.claim(d);
      free_at_end_.push_back(r.spot);
      record(1, "move", q, -1, {r.spot, d}, "ok");
      r.spot = d;
      r.moved_this_step = true;
      ++counters_.moves;
      progress = true;
      break;
    }
  }

  // (2) CNOT routing, ascending control index
  for (int q = 0; q < circuit_.n_qubits; ++q) {
    if (categories_[static_cast<std::size_t>(q)] != QubitCategory::Cnot1) continue;
    const int gid = head_gate(q);
    const Gate& g = circuit_.gates[static_cast<std::size_t>(gid)];
    if (g.control() != q) continue;
    const int target = g.target();
    auto path = route_cnot(topo_, occupied_, q, target);
    if (path) {
      for (Spot s : *path) occupied_.claim(s);
      routes_.push_back({gid, q, target, *path, now});
      ++counters_.cnot_started;
      progress = true;
      record(2, "route", q, target, *path, "reserved");
    } else {
      ++counters_.cnot_route_failures;
      record(2, "route", q, target, {}, "blocked");
    }
  }

  // (3) allocate creation-trial spots with the two-stage objective
  std::vector<RotationRequest> requests;
  std::vector<RotationRequest> fresh;
  std::vector<double> create_angle(static_cast<std::size_t>(circuit_.n_qubits), 0.0);
  for (int q = 0; q < circuit_.n_qubits; ++q) {
    const QubitTask& task = tasks_[static_cast<std::size_t>(q)];
    switch (categories_[static_cast<std::size_t>(q)]) {
      case QubitCategory::Rz1:
      case QubitCategory::Rx1: {
        const Axis axis = categories_[static_cast<std::size_t>(q)] == QubitCategory::Rz1
                              ? Axis::Z
                              : Axis::X;
        requests.push_back({q, axis});
        fresh.push_back({q, axis});
        create_angle[static_cast<std::size_t>(q)] = task.theta_cur;
        break;
      }
      case QubitCategory::Rz3:
      case QubitCategory::Rx3: {
        const Axis axis = categories_[static_cast<std::size_t>(q)] == QubitCategory::Rz3
                              ? Axis::Z
                              : Axis::X;
        requests.push_back({q, axis});
        create_angle[static_cast<std::size_t>(q)] = normalize_angle(2.0 * task.theta_cur);
        break;
      }
      case QubitCategory::Cnot2Rz:
      case QubitCategory::Cnot2Rx: {
        const Axis axis =
            categories_[static_cast<std::size_t>(q)] == QubitCategory::Cnot2Rz ? Axis::Z
                                                                               : Axis::X;
        // first non-frame rotation after the CNOT
        double angle = 0.0;
        for (std::size_t i = task.head + 1; i < task.gate_ids.size(); ++i) {
          const Gate& n = circuit_.gates[static_cast<std::size_t>(task.gate_ids[i])];
          if (n.is_cnot()) break;
          const AngleClass cls = classify_angle(n.angle);
          if (cls == AngleClass::Identity || cls == AngleClass::Pauli) continue;
          angle = normalize_angle(n.angle);
          break;
        }
        requests.push_back({q, axis});
        create_angle[static_cast<std::size_t>(q)] = angle;
        break;
      }
      default:
        break;
    }
  }
  const QuboProblem p1 =
      build_first_stage(requests, topo_, occupied_, config_.qubo_a, config_.qubo_b);
  const Assignment a1 = solve(p1, rng_());
  const QuboProblem p2 =
      build_second_stage(fresh, topo_, occupied_, p1, a1, config_.qubo_a);
  const Assignment a2 = solve(p2, rng_());
  auto launch = [&](const QuboProblem& p, const Assignment& a) {
    for (int id : a.selected()) {
      const QuboVar& var = p.vars[static_cast<std::size_t>(id)];
      const double angle = create_angle[static_cast<std::size_t>(var.qubit)];
      Axis axis = Axis::Z;
      for (const RotationRequest& req : requests) {
        if (req.qubit == var.qubit) axis = req.axis;
      }
      occupied_.claim(var.spot);
      if (pauli_eigenstate_angle(angle)) {
        resources_.push_back({var.spot, var.qubit, axis, angle, true, false});
        ++counters_.clifford_creations;
        record(3, "create", var.qubit, -1, {var.spot}, "instant");
      } else {
        ++counters_.creation_trials;
        if (bernoulli(rng_, config_.p_cr)) {
          ++counters_.creation_successes;
          resources_.push_back({var.spot, var.qubit, axis, angle, false, false});
          record(3, "create", var.qubit, -1, {var.spot}, "success");
        } else {
          free_at_end_.push_back(var.spot);
          record(3, "create", var.qubit, -1, {var.spot}, "fail");
        }
      }
      progress = true;
    }
  };
  launch(p1, a1);
  launch(p2, a2);

  // (4) joint measurements on adjacent ready resources
  for (int q = 0; q < circuit_.n_qubits; ++q) {
    if (!tasks_[static_cast<std::size_t>(q)].rotation_active) continue;
    const int ri = find_resource(q, true);
    if (ri < 0) continue;
    const Spot rs = resources_[static_cast<std::size_t>(ri)].spot;
    resources_.erase(resources_.begin() + ri);
    free_at_end_.push_back(rs);
    ++counters_.measure_attempts;
    QubitTask& task = tasks_[static_cast<std::size_t>(q)];
    if (bernoulli(rng_, config_.p_cm)) {
      ++counters_.measure_successes;
      ++counters_.gates_completed;
      record(4, "measure", q, -1, {rs}, "success");
      advance_queue(q);
    } else {
      task.theta_cur = normalize_angle(2.0 * task.theta_cur);
      ++task.attempt;
      record(4, "measure", q, -1, {rs}, "fail");
    }
    progress = true;
  }

  // (5) second CNOT halves complete, paths release
  std::vector<CnotRoute> still_active;
  for (const CnotRoute& route : routes_) {
    if (now == 0 || route.started_at != now - 1) {
      still_active.push_back(route);
      continue;
    }
    for (Spot s : route.path) free_at_end_.push_back(s);
    ++counters_.cnot_completed;
    ++counters_.gates_completed;
    record(5, "cnot_done", route.control, route.target, route.path, "ok");
    advance_queue(route.control);
    advance_queue(route.target);
    progress = true;
  }
  routes_ = std::move(still_active);

  // (6) close the timestep
  ++t_;
  for (ResourceState& r : resources_) {
    r.ready = true;
    r.moved_this_step = false;
  }
  for (Spot s : free_at_end_) occupied_.release(s);
  free_at_end_.clear();
  if (progress) {
    no_progress_ = 0;
  } else if (++no_progress_ > config_.deadlock_limit) {
    deadlocked_ = true;
  }
}

bool Simulation::done() const {
  for (const QubitTask& task : tasks_) {
    if (task.head < task.gate_ids.size()) return false;
  }
  return true;
}

QubitCategory Simulation::category(int qubit) const {
  return categories_[static_cast<std::size_t>(qubit)];
}

double Simulation::rotation_angle(int qubit) const {
  return tasks_[static_cast<std::size_t>(qubit)].theta_cur;
}

int Simulation::rotation_attempt(int qubit) const {
  return tasks_[static_cast<std::size_t>(qubit)].attempt;
}

const std::vector<int>& Simulation::completed_gates(int qubit) const {
  return completed_[static_cast<std::size_t>(qubit)];
}

std::string Simulation::diagnostic() const {
  std::ostringstream os;
  os << "t=" << t_ << " categories:";
  for (int q = 0; q < circuit_.n_qubits; ++q) {
    os << " q" << q << "=" << to_string(categories_[static_cast<std::size_t>(q)]);
  }
  os << " resources=" << resources_.size() << " routes=" << routes_.size();
  return os.str();
}

bool Simulation::spot_exclusivity_ok() const {
  std::vector<Spot> used;
  for (int q = 0; q < topo_.n_qubits(); ++q) used.push_back(topo_.spot_of(q));
  for (const ResourceState& r : resources_) used.push_back(r.spot);
  for (const CnotRoute& route : routes_) {
    for (Spot s : route.path) used.push_back(s);
  }
  std::sort(used.begin(), used.end());
  return std::adjacent_find(used.begin(), used.end()) == used.end();
}

void Simulation::record(int phase, const std::string& kind, int qubit, int qubit2,
                        std::vector<Spot> spots, const std::string& outcome) {
  if (!config_.record_events) return;
  events_.push_back({t_, phase, kind, qubit, qubit2, std::move(spots), outcome});
}

SimResult Simulation::take_result() {
  SimResult result;
  result.t_clock = t_;
  result.deadlocked = deadlocked_;
  if (deadlocked_) result.diagnostic = diagnostic();
  result.counters = counters_;
  result.events = std::move(events_);
  return result;
}

SimResult run(const Circuit& circuit, const Topology& topo, const RunConfig& config,
              std::uint64_t seed) {
  Simulation sim(circuit, topo, config, seed);
  while (!sim.done() && !sim.deadlocked()) sim.step();
  return sim.take_result();
}

}  // namespace star
