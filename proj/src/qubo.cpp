#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "star/qubo.hpp"
#include "star/rng.hpp"

namespace star {

namespace {

void add_quadratic(std::map<std::pair<int, int>, double>& quad, int k, int l,
                   double coeff) {
  if (k > l) std::swap(k, l);
  quad[{k, l}] += coeff;
}

std::vector<std::tuple<int, int, double>> flatten(
    const std::map<std::pair<int, int>, double>& quad) {
  std::vector<std::tuple<int, int, double>> out;
  out.reserve(quad.size());
  for (const auto& [key, coeff] : quad) {
    out.emplace_back(key.first, key.second, coeff);
  }
  return out;
}

}  // namespace

QuboProblem build_first_stage(const std::vector<RotationRequest>& requests,
                              const Topology& topo, const OccupancyGrid& occupied,
                              double a, double b) {
  QuboProblem p;
  p.a = a;
  p.b = b;
  std::map<Spot, std::vector<int>> by_spot;
  std::vector<std::vector<int>> by_request;
  for (const RotationRequest& req : requests) {
    std::vector<int> ids;
    for (Spot s : axis_neighbors(topo, req.qubit, req.axis)) {
      if (topo.qubit_at(s) >= 0 || occupied.test(s)) continue;
      const int id = p.size();
      p.vars.push_back({id, req.qubit, s, QuboStage::First});
      p.linear.push_back(0.0);
      by_spot[s].push_back(id);
      ids.push_back(id);
    }
    by_request.push_back(std::move(ids));
  }

  std::map<std::pair<int, int>, double> quad;
  for (int v = 0; v < p.size(); ++v) p.linear[static_cast<std::size_t>(v)] -= 1.0;
  for (const auto& [spot, ids] : by_spot) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      for (std::size_t l = k + 1; l < ids.size(); ++l) {
        add_quadratic(quad, ids[k], ids[l], a);
      }
    }
  }
  for (const auto& ids : by_request) {
    // product over (1 - b_i); a qubit has at most two candidate spots
    if (ids.size() > 2) throw std::logic_error("first stage: degree bound exceeded");
    p.constant += b;
    for (int id : ids) p.linear[static_cast<std::size_t>(id)] -= b;
    if (ids.size() == 2) add_quadratic(quad, ids[0], ids[1], b);
  }
  p.quadratic = flatten(quad);
  return p;
}

QuboProblem build_second_stage(const std::vector<RotationRequest>& requests,
                               const Topology& topo, const OccupancyGrid& occupied,
                               const QuboProblem& first,
                               const Assignment& first_choice, double a) {
  QuboProblem p;
  p.a = a;
  p.b = 0.0;

  std::vector<Spot> taken;
  for (int id : first_choice.selected()) {
    taken.push_back(first.vars[static_cast<std::size_t>(id)].spot);
  }
  auto first_stage_took = [&](Spot s) {
    return std::find(taken.begin(), taken.end(), s) != taken.end();
  };

  std::map<Spot, std::vector<int>> by_spot;
  for (const RotationRequest& req : requests) {
    std::vector<Spot> bases;
    for (int id : first_choice.selected()) {
      const QuboVar& v = first.vars[static_cast<std::size_t>(id)];
      if (v.qubit == req.qubit) bases.push_back(v.spot);
    }
    std::vector<Spot> cands;
    for (Spot w1 : bases) {
      for (Spot w2 : {Spot{w1.x, w1.y - 1}, Spot{w1.x - 1, w1.y},
                      Spot{w1.x + 1, w1.y}, Spot{w1.x, w1.y + 1}}) {
        if (!topo.in_grid(w2) || topo.qubit_at(w2) >= 0 || occupied.test(w2)) continue;
        if (first_stage_took(w2)) continue;
        if (std::find(cands.begin(), cands.end(), w2) == cands.end()) {
          cands.push_back(w2);
        }
      }
    }
    std::sort(cands.begin(), cands.end(), yx_less);
    for (Spot s : cands) {
      const int id = p.size();
      p.vars.push_back({id, req.qubit, s, QuboStage::Second});
      p.linear.push_back(-1.0);
      by_spot[s].push_back(id);
    }
  }

  std::map<std::pair<int, int>, double> quad;
  for (const auto& [spot, ids] : by_spot) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      for (std::size_t l = k + 1; l < ids.size(); ++l) {
        add_quadratic(quad, ids[k], ids[l], a);
      }
    }
  }
  p.quadratic = flatten(quad);
  return p;
}

double evaluate(const QuboProblem& p, const std::vector<char>& values) {
  double obj = p.constant;
  for (int v = 0; v < p.size(); ++v) {
    if (values[static_cast<std::size_t>(v)]) obj += p.linear[static_cast<std::size_t>(v)];
  }
  for (const auto& [k, l, coeff] : p.quadratic) {
    if (values[static_cast<std::size_t>(k)] && values[static_cast<std::size_t>(l)]) {
      obj += coeff;
    }
  }
  return obj;
}

void repair(const QuboProblem& p, std::vector<char>& values) {
  std::map<Spot, int> holder;
  for (int v = 0; v < p.size(); ++v) {
    if (!values[static_cast<std::size_t>(v)]) continue;
    const Spot s = p.vars[static_cast<std::size_t>(v)].spot;
    auto [it, inserted] = holder.try_emplace(s, v);
    if (!inserted) values[static_cast<std::size_t>(v)] = 0;  // keep the lower id
  }
}

namespace {

// Enumerates masks so that valuations appear in lexicographic order
// (var 0 most significant); the first strict minimum is the lex-smallest.
Assignment exhaustive_on(const QuboProblem& p, const std::vector<int>& ids) {
  const int k = static_cast<int>(ids.size());
  std::vector<char> values(static_cast<std::size_t>(p.size()), 0);
  std::vector<char> best_local(static_cast<std::size_t>(k), 0);
  double best = 0.0;
  bool have_best = false;
  std::vector<char> local(static_cast<std::size_t>(k), 0);

  // Per-component evaluation: restrict terms to this component.
  std::vector<double> lin(static_cast<std::size_t>(k));
  std::vector<int> pos(static_cast<std::size_t>(p.size()), -1);
  for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = i;
  for (int i = 0; i < k; ++i) {
    lin[static_cast<std::size_t>(i)] = p.linear[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])];
  }
  std::vector<std::tuple<int, int, double>> quad;
  for (const auto& [a, b, c] : p.quadratic) {
    const int pa = pos[static_cast<std::size_t>(a)];
    const int pb = pos[static_cast<std::size_t>(b)];
    if (pa >= 0 && pb >= 0) quad.emplace_back(pa, pb, c);
  }

  const std::uint64_t total = 1ULL << k;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < k; ++i) {
      local[static_cast<std::size_t>(i)] =
          static_cast<char>((mask >> (k - 1 - i)) & 1ULL);
    }
    double obj = 0.0;
    for (int i = 0; i < k; ++i) {
      if (local[static_cast<std::size_t>(i)]) obj += lin[static_cast<std::size_t>(i)];
    }
    for (const auto& [a, b, c] : quad) {
      if (local[static_cast<std::size_t>(a)] && local[static_cast<std::size_t>(b)]) obj += c;
    }
    if (!have_best || obj < best) {
      best = obj;
      best_local = local;
      have_best = true;
    }
  }
  Assignment out;
  out.values = std::move(values);
  for (int i = 0; i < k; ++i) {
    out.values[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] =
        best_local[static_cast<std::size_t>(i)];
  }
  out.objective = best;
  return out;
}

std::vector<std::vector<int>> components(const QuboProblem& p) {
  const int n = p.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& [a, b, c] : p.quadratic) {
    (void)c;
    const int ra = find(a);
    const int rb = find(b);
    if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Assignment solve_exhaustive(const QuboProblem& p) {
  if (p.size() > 25) {
    throw std::invalid_argument("exhaustive solve limited to 25 variables");
  }
  std::vector<int> ids(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) ids[static_cast<std::size_t>(i)] = i;
  Assignment out = exhaustive_on(p, ids);
  repair(p, out.values);
  out.objective = evaluate(p, out.values);
  return out;
}

Assignment solve_annealed(const QuboProblem& p, std::uint64_t seed,
                          const AnnealParams& params) {
  const int n = p.size();
  Assignment out;
  out.values.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) {
    out.objective = p.constant;
    return out;
  }

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  double max_coeff = 0.0;
  for (int v = 0; v < n; ++v) {
    max_coeff = std::max(max_coeff, std::abs(p.linear[static_cast<std::size_t>(v)]));
  }
  for (const auto& [a, b, c] : p.quadratic) {
    adj[static_cast<std::size_t>(a)].emplace_back(b, c);
    adj[static_cast<std::size_t>(b)].emplace_back(a, c);
    max_coeff = std::max(max_coeff, std::abs(c));
  }

  std::mt19937_64 rng(seed);
  const int iters =
      std::max(params.min_sweeps, params.sweeps_per_var * n);
  const double t0 = std::max(1e-9, params.t0_scale * max_coeff);
  const double cool = std::pow(params.t_end / t0, 1.0 / iters);

  std::vector<char> best(static_cast<std::size_t>(n), 0);
  double best_obj = evaluate(p, best);
  std::vector<char> cur(static_cast<std::size_t>(n), 0);
  for (int restart = 0; restart < params.restarts; ++restart) {
    if (restart == 0) {
      std::fill(cur.begin(), cur.end(), 0);
    } else {
      for (auto& v : cur) v = static_cast<char>(uniform_below(rng, 2));
    }
    double obj = evaluate(p, cur);
    double temp = t0;
    for (int it = 0; it < iters; ++it) {
      const int v = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      double delta = p.linear[static_cast<std::size_t>(v)];
      for (const auto& [u, c] : adj[static_cast<std::size_t>(v)]) {
        if (cur[static_cast<std::size_t>(u)]) delta += c;
      }
      if (cur[static_cast<std::size_t>(v)]) delta = -delta;
      if (delta <= 0.0 || uniform_unit(rng) < std::exp(-delta / temp)) {
        cur[static_cast<std::size_t>(v)] ^= 1;
        obj += delta;
        if (obj < best_obj) {
          best_obj = obj;
          best = cur;
        }
      }
      temp *= cool;
    }
  }
  repair(p, best);
  out.values = std::move(best);
  out.objective = evaluate(p, out.values);
  return out;
}

Assignment solve(const QuboProblem& p, std::uint64_t seed) {
  const int n = p.size();
  Assignment out;
  out.values.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) {
    out.objective = p.constant;
    return out;
  }
  constexpr int kExhaustiveLimit = 20;
  std::uint64_t sub = 0;
  for (const std::vector<int>& comp : components(p)) {
    if (static_cast<int>(comp.size()) <= kExhaustiveLimit) {
      const Assignment part = exhaustive_on(p, comp);
      for (int id : comp) {
        out.values[static_cast<std::size_t>(id)] = part.values[static_cast<std::size_t>(id)];
      }
    } else {
      // restrict to the component and anneal it
      QuboProblem sp;
      sp.a = p.a;
      sp.b = p.b;
      std::vector<int> pos(static_cast<std::size_t>(n), -1);
      for (int i = 0; i < static_cast<int>(comp.size()); ++i) {
        pos[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;
        const QuboVar& v = p.vars[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])];
        sp.vars.push_back({i, v.qubit, v.spot, v.stage});
        sp.linear.push_back(p.linear[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])]);
      }
      for (const auto& [a, b, c] : p.quadratic) {
        const int pa = pos[static_cast<std::size_t>(a)];
        const int pb = pos[static_cast<std::size_t>(b)];
        if (pa >= 0 && pb >= 0) sp.quadratic.emplace_back(pa, pb, c);
      }
      const Assignment sub_asg = solve_annealed(sp, derive_seed(seed, sub++));
      for (int i = 0; i < static_cast<int>(comp.size()); ++i) {
        out.values[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] =
            sub_asg.values[static_cast<std::size_t>(i)];
      }
    }
  }
  repair(p, out.values);
  out.objective = evaluate(p, out.values);
  return out;
}

}  // namespace star
