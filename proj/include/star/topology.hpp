#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace star {

/// Grid cell holding one surface-code patch. Adjacency is L1 distance 1.
struct Spot {
  int x = 0;
  int y = 0;
  auto operator<=>(const Spot&) const = default;
};

/// Row-major comparison used for deterministic tie-breaking.
inline bool yx_less(const Spot& a, const Spot& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline int l1_distance(const Spot& a, const Spot& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

/// Patch orientation is global: Z edges face the vertical neighbors
/// (x, y +/- 1), X edges face the horizontal neighbors (x +/- 1, y).
enum class Axis { X, Z };

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Topology {
 public:
  Topology() = default;
  /// Throws TopologyError if a spot is outside the grid or placed twice.
  Topology(int width, int height, std::vector<Spot> placement);

  int width() const { return width_; }
  int height() const { return height_; }
  int n_qubits() const { return static_cast<int>(placement_.size()); }
  const std::vector<Spot>& placement() const { return placement_; }
  Spot spot_of(int qubit) const { return placement_[static_cast<std::size_t>(qubit)]; }

  bool in_grid(Spot s) const {
    return s.x >= 0 && s.x < width_ && s.y >= 0 && s.y < height_;
  }
  /// -1 when the spot is free of data qubits.
  int qubit_at(Spot s) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Spot> placement_;
  std::vector<int> spot_to_qubit_;
};

/// Dynamic occupancy (resource states, routes, reservations) layered on top
/// of the static qubit placement. Claiming a held spot throws: each spot may
/// host at most one occupant at a time.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height)
      : width_(width), cells_(static_cast<std::size_t>(width) * height, 0) {}

  bool test(Spot s) const { return cells_[index(s)] != 0; }
  void claim(Spot s) {
    if (cells_[index(s)]) throw std::logic_error("spot already occupied");
    cells_[index(s)] = 1;
  }
  void release(Spot s) {
    if (!cells_[index(s)]) throw std::logic_error("releasing a free spot");
    cells_[index(s)] = 0;
  }

 private:
  std::size_t index(Spot s) const {
    return static_cast<std::size_t>(s.y) * width_ + s.x;
  }
  int width_ = 0;
  std::vector<char> cells_;
};

/// In-grid vertical neighbors of the qubit's spot, in (y, x) order.
std::vector<Spot> neighbors_z(const Topology& topo, int qubit);
/// In-grid horizontal neighbors of the qubit's spot, in (y, x) order.
std::vector<Spot> neighbors_x(const Topology& topo, int qubit);
std::vector<Spot> axis_neighbors(const Topology& topo, int qubit, Axis axis);

struct OpenEdges {
  int x_open = 0;
  int z_open = 0;
};

/// Counts axis neighbors that are inside the grid and not occupied by a data
/// qubit.
OpenEdges open_edges(const Topology& topo, int qubit);

struct Violation {
  enum class Kind { OpenEdges, CnotPath };
  Kind kind = Kind::OpenEdges;
  int q1 = -1;
  int q2 = -1;  // only for CnotPath
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the mapping constraints: every qubit keeps at least one open X edge
/// and one open Z edge, and every ordered pair (q1, q2) admits a path of free
/// spots from a Z neighbor of q1 to an X neighbor of q2.
ValidationReport validate(const Topology& topo);

/// Densest valid mapping: 4mn qubits on a 3m x 3n grid, four per 3x3 block.
Topology gen_dense(int m, int n);

/// Uniform rejection sampling over injective placements until validate()
/// passes. Deterministic for a fixed seed.
Topology gen_random(int width, int height, int n_qubits, std::uint64_t seed,
                    int max_attempts = 100000);

/// Shortest path of free spots (BFS, (y, x) tie-break) from a Z neighbor of
/// `control` to an X neighbor of `target`, avoiding data qubits and spots in
/// `occupied`. Path length is the number of spots. Empty optional when no
/// route exists this instant.
std::optional<std::vector<Spot>> route_cnot(const Topology& topo,
                                            const OccupancyGrid& occupied,
                                            int control, int target);

std::string topology_to_json(const Topology& topo);
Topology topology_from_json(const std::string& text);
Topology topology_from_json_file(const std::string& path);

}  // namespace star
