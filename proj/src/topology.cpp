#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "star/rng.hpp"
#include "star/topology.hpp"

namespace star {

Topology::Topology(int width, int height, std::vector<Spot> placement)
    : width_(width), height_(height), placement_(std::move(placement)) {
  if (width_ < 1 || height_ < 1) throw TopologyError("grid dimensions must be positive");
  spot_to_qubit_.assign(static_cast<std::size_t>(width_) * height_, -1);
  for (int q = 0; q < n_qubits(); ++q) {
    const Spot s = placement_[static_cast<std::size_t>(q)];
    if (!in_grid(s)) throw TopologyError("qubit placed outside the grid");
    int& cell = spot_to_qubit_[static_cast<std::size_t>(s.y) * width_ + s.x];
    if (cell != -1) throw TopologyError("two qubits share a spot");
    cell = q;
  }
}

int Topology::qubit_at(Spot s) const {
  if (!in_grid(s)) return -1;
  return spot_to_qubit_[static_cast<std::size_t>(s.y) * width_ + s.x];
}

namespace {

// Neighbor offsets in (y, x) order.
constexpr int kDx[4] = {0, -1, 1, 0};
constexpr int kDy[4] = {-1, 0, 0, 1};

bool spot_free(const Topology& topo, const OccupancyGrid& occupied, Spot s) {
  return topo.in_grid(s) && topo.qubit_at(s) < 0 && !occupied.test(s);
}

}  // namespace

std::vector<Spot> neighbors_z(const Topology& topo, int qubit) {
  const Spot s = topo.spot_of(qubit);
  std::vector<Spot> out;
  for (Spot n : {Spot{s.x, s.y - 1}, Spot{s.x, s.y + 1}}) {
    if (topo.in_grid(n)) out.push_back(n);
  }
  return out;
}

std::vector<Spot> neighbors_x(const Topology& topo, int qubit) {
  const Spot s = topo.spot_of(qubit);
  std::vector<Spot> out;
  for (Spot n : {Spot{s.x - 1, s.y}, Spot{s.x + 1, s.y}}) {
    if (topo.in_grid(n)) out.push_back(n);
  }
  return out;
}

std::vector<Spot> axis_neighbors(const Topology& topo, int qubit, Axis axis) {
  return axis == Axis::Z ? neighbors_z(topo, qubit) : neighbors_x(topo, qubit);
}

OpenEdges open_edges(const Topology& topo, int qubit) {
  OpenEdges e;
  for (Spot s : neighbors_x(topo, qubit)) {
    if (topo.qubit_at(s) < 0) ++e.x_open;
  }
  for (Spot s : neighbors_z(topo, qubit)) {
    if (topo.qubit_at(s) < 0) ++e.z_open;
  }
  return e;
}

ValidationReport validate(const Topology& topo) {
  ValidationReport report;
  const int nq = topo.n_qubits();
  for (int q = 0; q < nq; ++q) {
    const OpenEdges e = open_edges(topo, q);
    if (e.x_open < 1 || e.z_open < 1) {
      report.violations.push_back({Violation::Kind::OpenEdges, q, -1});
    }
  }

  // Connected components of the free subgraph; a pair (q1, q2) is routable
  // iff some component touches both a Z edge of q1 and an X edge of q2.
  const int w = topo.width();
  const int h = topo.height();
  std::vector<int> comp(static_cast<std::size_t>(w) * h, -1);
  int n_comp = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Spot start{x, y};
      const std::size_t si = static_cast<std::size_t>(y) * w + x;
      if (topo.qubit_at(start) >= 0 || comp[si] != -1) continue;
      std::deque<Spot> queue{start};
      comp[si] = n_comp;
      while (!queue.empty()) {
        const Spot s = queue.front();
        queue.pop_front();
        for (int d = 0; d < 4; ++d) {
          const Spot n{s.x + kDx[d], s.y + kDy[d]};
          if (!topo.in_grid(n) || topo.qubit_at(n) >= 0) continue;
          const std::size_t ni = static_cast<std::size_t>(n.y) * w + n.x;
          if (comp[ni] != -1) continue;
          comp[ni] = n_comp;
          queue.push_back(n);
        }
      }
      ++n_comp;
    }
  }
  auto comps_of = [&](const std::vector<Spot>& spots) {
    std::vector<int> ids;
    for (Spot s : spots) {
      if (topo.qubit_at(s) >= 0) continue;
      const int c = comp[static_cast<std::size_t>(s.y) * w + s.x];
      if (std::find(ids.begin(), ids.end(), c) == ids.end()) ids.push_back(c);
    }
    return ids;
  };
  std::vector<std::vector<int>> z_comps(static_cast<std::size_t>(nq));
  std::vector<std::vector<int>> x_comps(static_cast<std::size_t>(nq));
  for (int q = 0; q < nq; ++q) {
    z_comps[static_cast<std::size_t>(q)] = comps_of(neighbors_z(topo, q));
    x_comps[static_cast<std::size_t>(q)] = comps_of(neighbors_x(topo, q));
  }
  for (int q1 = 0; q1 < nq; ++q1) {
    for (int q2 = 0; q2 < nq; ++q2) {
      if (q1 == q2) continue;
      bool reachable = false;
      for (int c : z_comps[static_cast<std::size_t>(q1)]) {
        for (int d : x_comps[static_cast<std::size_t>(q2)]) {
          if (c == d) reachable = true;
        }
      }
      if (!reachable) {
        report.violations.push_back({Violation::Kind::CnotPath, q1, q2});
      }
    }
  }
  return report;
}

Topology gen_dense(int m, int n) {
  if (m < 1 || n < 1) throw TopologyError("dense mapping needs m, n >= 1");
  const int w = 3 * m;
  const int h = 3 * n;
  std::vector<Spot> placement;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x % 3 != 1 && y % 3 != 1) placement.push_back({x, y});
    }
  }
  return Topology(w, h, std::move(placement));
}

Topology gen_random(int width, int height, int n_qubits, std::uint64_t seed,
                    int max_attempts) {
  if (width < 1 || height < 1 || n_qubits < 1) {
    throw TopologyError("gen_random needs positive dimensions and qubit count");
  }
  const long blocks = static_cast<long>((width + 2) / 3) * ((height + 2) / 3);
  if (n_qubits > 4 * blocks) {
    throw TopologyError("no valid topology found: qubit count exceeds the 4:9 density bound");
  }
  std::mt19937_64 rng(seed);
  std::vector<Spot> spots;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) spots.push_back({x, y});
  }
  const std::size_t n = spots.size();
  if (static_cast<std::size_t>(n_qubits) > n) {
    throw TopologyError("no valid topology found: more qubits than spots");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (int i = 0; i < n_qubits; ++i) {
      const std::size_t j = i + uniform_below(rng, n - i);
      std::swap(spots[static_cast<std::size_t>(i)], spots[j]);
    }
    Topology topo(width, height,
                  std::vector<Spot>(spots.begin(), spots.begin() + n_qubits));
    if (validate(topo).ok()) return topo;
  }
  throw TopologyError("no valid topology found after " +
                      std::to_string(max_attempts) + " attempts");
}

std::optional<std::vector<Spot>> route_cnot(const Topology& topo,
                                            const OccupancyGrid& occupied,
                                            int control, int target) {
  const int w = topo.width();
  const int h = topo.height();
  std::vector<char> is_goal(static_cast<std::size_t>(w) * h, 0);
  bool any_goal = false;
  for (Spot s : neighbors_x(topo, target)) {
    if (spot_free(topo, occupied, s)) {
      is_goal[static_cast<std::size_t>(s.y) * w + s.x] = 1;
      any_goal = true;
    }
  }
  if (!any_goal) return std::nullopt;

  std::vector<int> parent(static_cast<std::size_t>(w) * h, -2);
  std::deque<Spot> queue;
  for (Spot s : neighbors_z(topo, control)) {
    if (!spot_free(topo, occupied, s)) continue;
    const std::size_t i = static_cast<std::size_t>(s.y) * w + s.x;
    if (parent[i] != -2) continue;
    parent[i] = -1;  // source
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Spot s = queue.front();
    queue.pop_front();
    const std::size_t si = static_cast<std::size_t>(s.y) * w + s.x;
    if (is_goal[si]) {
      std::vector<Spot> path;
      Spot cur = s;
      while (true) {
        path.push_back(cur);
        const int p = parent[static_cast<std::size_t>(cur.y) * w + cur.x];
        if (p < 0) break;
        cur = {p % w, p / w};
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int d = 0; d < 4; ++d) {
      const Spot n{s.x + kDx[d], s.y + kDy[d]};
      if (!spot_free(topo, occupied, n)) continue;
      const std::size_t ni = static_cast<std::size_t>(n.y) * w + n.x;
      if (parent[ni] != -2) continue;
      parent[ni] = static_cast<int>(si);
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string topology_to_json(const Topology& topo) {
  ordered_json j;
  j["width"] = topo.width();
  j["height"] = topo.height();
  ordered_json qubits = ordered_json::array();
  for (int q = 0; q < topo.n_qubits(); ++q) {
    const Spot s = topo.spot_of(q);
    qubits.push_back({{"id", q}, {"x", s.x}, {"y", s.y}});
  }
  j["qubits"] = std::move(qubits);
  return j.dump(2) + "\n";
}

Topology topology_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  const auto& qubits = j.at("qubits");
  std::vector<Spot> placement(qubits.size());
  for (const auto& e : qubits) {
    const int id = e.at("id").get<int>();
    if (id < 0 || id >= static_cast<int>(placement.size())) {
      throw TopologyError("topology json: qubit ids must be 0..n-1");
    }
    placement[static_cast<std::size_t>(id)] = {e.at("x").get<int>(), e.at("y").get<int>()};
  }
  return Topology(w, h, std::move(placement));
}

Topology topology_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return topology_from_json(ss.str());
}

}  // namespace star
