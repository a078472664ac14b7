#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "star/cli.hpp"
#include "star/estimators.hpp"
#include "star/experiment.hpp"
#include "star/parallel.hpp"

namespace star {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitContent = 2;
constexpr int kExitDeadlock = 3;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// topology sources
// ---------------------------------------------------------------------------

struct TopologySource {
  std::string mode;  // files | dir | random | dense
  std::vector<std::string> paths;
  std::string dir;
  int width = 0, height = 0, qubits = 0, count = 0;
  std::uint64_t seed = 0;
  int m = 0, n = 0;

  ordered_json to_json() const {
    ordered_json j;
    j["mode"] = mode;
    if (mode == "files") j["paths"] = paths;
    if (mode == "dir") j["dir"] = dir;
    if (mode == "random") {
      j["width"] = width;
      j["height"] = height;
      j["qubits"] = qubits;
      j["count"] = count;
      j["seed"] = seed;
    }
    if (mode == "dense") {
      j["m"] = m;
      j["n"] = n;
    }
    return j;
  }

  static TopologySource from_json(const ordered_json& j) {
    TopologySource s;
    s.mode = j.at("mode").get<std::string>();
    if (s.mode == "files") s.paths = j.at("paths").get<std::vector<std::string>>();
    if (s.mode == "dir") s.dir = j.at("dir").get<std::string>();
    if (s.mode == "random") {
      s.width = j.at("width").get<int>();
      s.height = j.at("height").get<int>();
      s.qubits = j.at("qubits").get<int>();
      s.count = j.at("count").get<int>();
      s.seed = j.at("seed").get<std::uint64_t>();
    }
    if (s.mode == "dense") {
      s.m = j.at("m").get<int>();
      s.n = j.at("n").get<int>();
    }
    return s;
  }
};

std::string topo_id_from_path(const std::string& path) {
  std::string base = fs::path(path).filename().string();
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return base;
}

std::vector<std::pair<std::string, Topology>> resolve_topologies(
    const TopologySource& src) {
  std::vector<std::pair<std::string, Topology>> out;
  if (src.mode == "files") {
    for (const std::string& p : src.paths) {
      out.emplace_back(topo_id_from_path(p), topology_from_json_file(p));
    }
  } else if (src.mode == "dir") {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(src.dir)) {
      if (e.path().extension() == ".json") files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    for (const std::string& p : files) {
      out.emplace_back(topo_id_from_path(p), topology_from_json_file(p));
    }
  } else if (src.mode == "random") {
    out.resize(static_cast<std::size_t>(src.count));
    parallel_for(static_cast<std::size_t>(src.count), [&](std::size_t i) {
      char id[16];
      std::snprintf(id, sizeof id, "r%04zu", i);
      out[i] = {id, gen_random(src.width, src.height, src.qubits,
                               derive_seed(src.seed, i))};
    });
  } else if (src.mode == "dense") {
    char id[32];
    std::snprintf(id, sizeof id, "dense_%dx%d", src.m, src.n);
    out.emplace_back(id, gen_dense(src.m, src.n));
  } else {
    throw std::runtime_error("no topology source given (use --topology, "
                             "--topology-dir, --random or --dense)");
  }
  if (out.empty()) throw std::runtime_error("topology source is empty");
  return out;
}

// ---------------------------------------------------------------------------
// experiment configuration (embedded into every report for reproducibility)
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string command;
  std::string circuit;
  TopologySource topology;
  double p_cr = 0.8;
  double p_cm = 0.5;
  int trials = 50;
  std::uint64_t seed = 1;
  int deadlock_limit = 1000;
  double w = 0.3;
  std::string format = "csv";
  // search
  int candidates = 5000;
  int keep = 25;
  int baseline = 200;
  bool then_simulate = false;

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["circuit"] = circuit;
    j["topology"] = topology.to_json();
    if (command == "simulate" || command == "search") {
      j["p_cr"] = p_cr;
      j["p_cm"] = p_cm;
      j["trials"] = trials;
      j["deadlock_limit"] = deadlock_limit;
    }
    j["seed"] = seed;
    if (command == "estimate" || command == "search") j["w"] = w;
    if (command == "search") {
      j["candidates"] = candidates;
      j["keep"] = keep;
      j["baseline"] = baseline;
      j["then_simulate"] = then_simulate;
    }
    j["format"] = format;
    return j;
  }

  void apply_json(const ordered_json& raw) {
    const ordered_json& j = raw.contains("config") ? raw.at("config") : raw;
    if (j.contains("circuit")) circuit = j.at("circuit").get<std::string>();
    if (j.contains("topology")) topology = TopologySource::from_json(j.at("topology"));
    if (j.contains("p_cr")) p_cr = j.at("p_cr").get<double>();
    if (j.contains("p_cm")) p_cm = j.at("p_cm").get<double>();
    if (j.contains("trials")) trials = j.at("trials").get<int>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("deadlock_limit")) deadlock_limit = j.at("deadlock_limit").get<int>();
    if (j.contains("w")) w = j.at("w").get<double>();
    if (j.contains("format")) format = j.at("format").get<std::string>();
    if (j.contains("candidates")) candidates = j.at("candidates").get<int>();
    if (j.contains("keep")) keep = j.at("keep").get<int>();
    if (j.contains("baseline")) baseline = j.at("baseline").get<int>();
    if (j.contains("then_simulate")) then_simulate = j.at("then_simulate").get<bool>();
  }

  RunConfig run_config() const {
    RunConfig rc;
    rc.p_cr = p_cr;
    rc.p_cm = p_cm;
    rc.deadlock_limit = deadlock_limit;
    return rc;
  }
};

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

// ---------------------------------------------------------------------------
// transpile
// ---------------------------------------------------------------------------

int cmd_transpile(const std::string& input, const std::string& out_path) {
  const Circuit parsed = parse_qasm_file(input);
  const Circuit circuit = fuse_single_qubit(rewrite_to_basis(parsed));
  const Densities d = densities(circuit);
  std::cout << "circuit " << circuit.source_name << ": qubits=" << circuit.n_qubits
            << " gates=" << circuit.gates.size() << " cnot=" << d.n_cnot
            << " analog=" << d.n_analog << " n_s=" << d.n_s << "\n";
  std::cout << "D_analog=" << (d.analog ? format_double(*d.analog) : "n/a")
            << " D_cnot=" << (d.cnot ? format_double(*d.cnot) : "n/a") << "\n";
  if (!out_path.empty()) write_file(out_path, circuit_to_json(circuit));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-topology
// ---------------------------------------------------------------------------

int cmd_gen_dense(int m, int n, const std::string& out_path) {
  const Topology topo = gen_dense(m, n);
  const std::string text = topology_to_json(topo);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

int cmd_gen_random(int width, int height, int qubits, int count,
                   std::uint64_t seed, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> texts(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    texts[i] = topology_to_json(
        gen_random(width, height, qubits, derive_seed(seed, i)));
  });
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "topo_%04d.json", i);
    write_file((fs::path(out_dir) / name).string(), texts[static_cast<std::size_t>(i)]);
  }
  std::cout << "wrote " << count << " topologies to " << out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path) {
  const Topology topo = topology_from_json_file(path);
  const ValidationReport report = validate(topo);
  if (report.ok()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  for (const Violation& v : report.violations) {
    if (v.kind == Violation::Kind::OpenEdges) {
      std::cout << "open-edges q" << v.q1 << "\n";
    } else {
      std::cout << "cnot-path q" << v.q1 << " -> q" << v.q2 << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

ordered_json event_to_json(const Event& e) {
  ordered_json j;
  j["t"] = e.t;
  j["phase"] = e.phase;
  j["kind"] = e.kind;
  if (e.qubit >= 0) j["qubit"] = e.qubit;
  if (e.qubit2 >= 0) j["qubit2"] = e.qubit2;
  ordered_json spots = ordered_json::array();
  for (Spot s : e.spots) spots.push_back({s.x, s.y});
  j["spots"] = std::move(spots);
  j["outcome"] = e.outcome;
  return j;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_path,
                 const std::string& events_dir, unsigned jobs) {
  const Circuit circuit = load_circuit(cfg.circuit);
  auto topos = resolve_topologies(cfg.topology);
  for (const auto& [id, topo] : topos) {
    if (topo.n_qubits() != circuit.n_qubits) {
      throw std::runtime_error("topology " + id + " has " +
                               std::to_string(topo.n_qubits()) +
                               " qubits, circuit has " +
                               std::to_string(circuit.n_qubits));
    }
    if (!validate(topo).ok()) {
      throw std::runtime_error("topology " + id + " fails validation");
    }
  }

  RunConfig rc = cfg.run_config();
  std::vector<TrialStats> stats(topos.size());
  if (events_dir.empty()) {
    parallel_for(topos.size(), [&](std::size_t i) {
      stats[i] = run_trials(circuit, topos[i].second, rc, cfg.seed, i, cfg.trials);
    }, jobs);
  } else {
    fs::create_directories(events_dir);
    rc.record_events = true;
    for (std::size_t i = 0; i < topos.size(); ++i) {
      TrialStats st;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        SimResult r = run(circuit, topos[i].second, rc,
                          trial_seed(cfg.seed, i, static_cast<std::uint64_t>(trial)));
        if (r.deadlocked) ++st.deadlocks;
        st.t_clocks.push_back(r.t_clock);
        std::ostringstream lines;
        for (const Event& e : r.events) lines << event_to_json(e).dump() << "\n";
        char name[64];
        std::snprintf(name, sizeof name, "events_%s_t%04d.jsonl",
                      topos[i].first.c_str(), trial);
        write_file((fs::path(events_dir) / name).string(), lines.str());
      }
      stats[i] = std::move(st);
    }
  }

  int total_deadlocks = 0;
  for (const TrialStats& st : stats) total_deadlocks += st.deadlocks;

  std::string content;
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = cfg.to_json();
    ordered_json results = ordered_json::array();
    for (std::size_t i = 0; i < topos.size(); ++i) {
      ordered_json r;
      r["topology_id"] = topos[i].first;
      r["t_clock_mean"] = stats[i].mean();
      r["t_clock_std"] = stats[i].stddev();
      r["deadlocks"] = stats[i].deadlocks;
      ordered_json trials = ordered_json::array();
      for (std::size_t k = 0; k < stats[i].t_clocks.size(); ++k) {
        trials.push_back({{"trial", k}, {"t_clock", stats[i].t_clocks[k]}});
      }
      r["trials"] = std::move(trials);
      results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    content = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# config: " << cfg.to_json().dump() << "\n";
    os << "topology_id,trials,t_clock_mean,t_clock_std,deadlocks\n";
    for (std::size_t i = 0; i < topos.size(); ++i) {
      os << topos[i].first << "," << stats[i].t_clocks.size() << ","
         << format_double(stats[i].mean()) << "," << format_double(stats[i].stddev())
         << "," << stats[i].deadlocks << "\n";
    }
    content = os.str();
  }
  emit(content, out_path);

  if (total_deadlocks > 0) {
    std::cerr << "deadlock detected in " << total_deadlocks << " trial(s)\n";
    return kExitDeadlock;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct SimRow {
  double mean = 0.0;
  double std = 0.0;
};

std::map<std::string, SimRow> read_sim_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, SimRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) continue;
    rows[cells[0]] = {std::stod(cells[2]), std::stod(cells[3])};
  }
  return rows;
}

int cmd_estimate(const ExperimentConfig& cfg, const std::string& sim_csv,
                 const std::string& out_path) {
  const Circuit circuit = load_circuit(cfg.circuit);
  auto topos = resolve_topologies(cfg.topology);
  std::map<std::string, SimRow> joined;
  if (!sim_csv.empty()) joined = read_sim_csv(sim_csv);

  struct Row {
    std::string id;
    double ea, ec, comb;
    std::optional<SimRow> sim;
  };
  std::vector<Row> rows(topos.size());
  parallel_for(topos.size(), [&](std::size_t i) {
    const auto& [id, topo] = topos[i];
    if (topo.n_qubits() != circuit.n_qubits) {
      throw std::runtime_error("topology " + id + " qubit count mismatch");
    }
    Row r;
    r.id = id;
    r.ea = e_analog(topo, circuit);
    r.ec = e_cnot(topo, circuit);
    r.comb = r.ea + cfg.w * r.ec;
    auto it = joined.find(id);
    if (it != joined.end()) r.sim = it->second;
    rows[i] = std::move(r);
  });

  const bool have_sim = !joined.empty();
  std::vector<double> ts, eas, ecs, combs;
  for (const Row& r : rows) {
    if (!r.sim) continue;
    ts.push_back(r.sim->mean);
    eas.push_back(r.ea);
    ecs.push_back(r.ec);
    combs.push_back(r.comb);
  }
  std::optional<double> r_ea, r_ec, r_comb;
  bool zero_variance_note = false;
  if (have_sim && ts.size() >= 2) {
    r_ea = pearson_r(ts, eas);
    r_ec = pearson_r(ts, ecs);
    r_comb = pearson_r(ts, combs);
    if (!r_ea || !r_ec || !r_comb) zero_variance_note = true;
  }
  auto r_text = [](const std::optional<double>& r) {
    return r ? format_double(*r) : std::string("0");
  };

  std::string content;
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = cfg.to_json();
    ordered_json out_rows = ordered_json::array();
    for (const Row& r : rows) {
      ordered_json e;
      e["topology_id"] = r.id;
      e["e_analog"] = r.ea;
      e["e_cnot"] = r.ec;
      e["e_comb"] = r.comb;
      if (r.sim) {
        e["t_clock_mean"] = r.sim->mean;
        e["t_clock_std"] = r.sim->std;
      }
      out_rows.push_back(std::move(e));
    }
    j["rows"] = std::move(out_rows);
    if (have_sim && ts.size() >= 2) {
      ordered_json rj;
      rj["e_analog"] = r_ea ? ordered_json(*r_ea) : ordered_json(0);
      rj["e_cnot"] = r_ec ? ordered_json(*r_ec) : ordered_json(0);
      rj["e_comb"] = r_comb ? ordered_json(*r_comb) : ordered_json(0);
      if (zero_variance_note) {
        rj["note"] = "zero variance; R reported as 0 by convention";
      }
      j["pearson_r"] = std::move(rj);
    }
    content = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# config: " << cfg.to_json().dump() << "\n";
    os << "topology_id,e_analog,e_cnot,e_comb";
    if (have_sim) os << ",t_clock_mean,t_clock_std";
    os << "\n";
    for (const Row& r : rows) {
      os << r.id << "," << format_double(r.ea) << "," << format_double(r.ec) << ","
         << format_double(r.comb);
      if (have_sim) {
        if (r.sim) {
          os << "," << format_double(r.sim->mean) << "," << format_double(r.sim->std);
        } else {
          os << ",,";
        }
      }
      os << "\n";
    }
    if (have_sim && ts.size() >= 2) {
      if (zero_variance_note) {
        os << "# note: zero variance; R reported as 0 by convention\n";
      }
      os << "R," << r_text(r_ea) << "," << r_text(r_ec) << "," << r_text(r_comb)
         << ",,\n";
    }
    content = os.str();
  }
  emit(content, out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int cmd_search(const ExperimentConfig& cfg, const std::string& out_path,
               const std::string& keep_dir, unsigned jobs) {
  const Circuit circuit = load_circuit(cfg.circuit);
  if (cfg.candidates < cfg.keep || cfg.keep < 1) {
    throw CLI::ValidationError("--candidates must be >= --keep >= 1");
  }
  TopologySource src = cfg.topology;
  if (src.qubits == 0) src.qubits = circuit.n_qubits;

  std::vector<Topology> cands(static_cast<std::size_t>(cfg.candidates));
  std::vector<double> scores(static_cast<std::size_t>(cfg.candidates));
  parallel_for(static_cast<std::size_t>(cfg.candidates), [&](std::size_t i) {
    cands[i] = gen_random(src.width, src.height, src.qubits,
                          derive_seed(cfg.seed, i));
    scores[i] = e_comb(cands[i], circuit, cfg.w);
  }, jobs);

  std::vector<int> order(static_cast<std::size_t>(cfg.candidates));
  for (int i = 0; i < cfg.candidates; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    return sa != sb ? sa > sb : a < b;
  });
  order.resize(static_cast<std::size_t>(cfg.keep));

  if (!keep_dir.empty()) {
    fs::create_directories(keep_dir);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      char name[48];
      std::snprintf(name, sizeof name, "pick_%03zu_r%04d.json", rank,
                    order[rank]);
      write_file((fs::path(keep_dir) / name).string(),
                 topology_to_json(cands[static_cast<std::size_t>(order[rank])]));
    }
  }

  const RunConfig rc = cfg.run_config();
  std::vector<TrialStats> kept_stats(order.size());
  std::vector<TrialStats> base_stats;
  std::vector<double> base_scores;
  if (cfg.then_simulate) {
    parallel_for(order.size(), [&](std::size_t i) {
      kept_stats[i] = run_trials(circuit, cands[static_cast<std::size_t>(order[i])],
                                 rc, cfg.seed, static_cast<std::uint64_t>(order[i]),
                                 cfg.trials);
    }, jobs);
    base_stats.resize(static_cast<std::size_t>(cfg.baseline));
    base_scores.resize(static_cast<std::size_t>(cfg.baseline));
    const std::uint64_t base_seed = splitmix64(cfg.seed ^ 0x626173656c6eULL);
    parallel_for(static_cast<std::size_t>(cfg.baseline), [&](std::size_t i) {
      const Topology topo = gen_random(src.width, src.height, src.qubits,
                                       derive_seed(base_seed, i));
      base_scores[i] = e_comb(topo, circuit, cfg.w);
      base_stats[i] = run_trials(circuit, topo, rc, base_seed, i, cfg.trials);
    }, jobs);
  }

  auto mean_of = [](const std::vector<TrialStats>& v) {
    double s = 0.0;
    for (const TrialStats& st : v) s += st.mean();
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };

  std::string content;
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = cfg.to_json();
    ordered_json rows = ordered_json::array();
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const int idx = order[rank];
      ordered_json e;
      char id[16];
      std::snprintf(id, sizeof id, "r%04d", idx);
      e["rank"] = rank;
      e["topology_id"] = id;
      e["e_comb"] = scores[static_cast<std::size_t>(idx)];
      if (cfg.then_simulate) {
        e["t_clock_mean"] = kept_stats[rank].mean();
        e["t_clock_std"] = kept_stats[rank].stddev();
      }
      rows.push_back(std::move(e));
    }
    j["picks"] = std::move(rows);
    if (cfg.then_simulate) {
      j["picked_mean_t_clock"] = mean_of(kept_stats);
      j["baseline_mean_t_clock"] = mean_of(base_stats);
      j["baseline_count"] = cfg.baseline;
    }
    content = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# config: " << cfg.to_json().dump() << "\n";
    os << "rank,topology_id,e_comb";
    if (cfg.then_simulate) os << ",t_clock_mean,t_clock_std";
    os << "\n";
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const int idx = order[rank];
      char id[16];
      std::snprintf(id, sizeof id, "r%04d", idx);
      os << rank << "," << id << ","
         << format_double(scores[static_cast<std::size_t>(idx)]);
      if (cfg.then_simulate) {
        os << "," << format_double(kept_stats[rank].mean()) << ","
           << format_double(kept_stats[rank].stddev());
      }
      os << "\n";
    }
    if (cfg.then_simulate) {
      os << "# picked_mean_t_clock=" << format_double(mean_of(kept_stats))
         << " baseline_mean_t_clock=" << format_double(mean_of(base_stats))
         << " baseline_count=" << cfg.baseline << "\n";
    }
    content = os.str();
  }
  emit(content, out_path);
  return kExitOk;
}

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ordered_json j;
  in >> j;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"lattice-surgery clock-cycle simulator, spot allocator and "
               "topology search for analog-rotation surface codes"};
  app.require_subcommand(1);

  // transpile
  std::string tr_input, tr_out;
  auto* transpile_cmd = app.add_subcommand(
      "transpile", "parse a QASM file, rewrite to the CNOT/Rx/Rz basis, fuse "
                   "single-qubit runs and report densities");
  transpile_cmd->add_option("input", tr_input, "QASM source file")->required();
  transpile_cmd->add_option("--out", tr_out, "write the circuit JSON here");

  // gen-topology
  auto* gen_cmd = app.add_subcommand("gen-topology", "generate qubit topologies");
  gen_cmd->require_subcommand(1);
  int gd_m = 1, gd_n = 1;
  std::string gd_out;
  auto* gen_dense_cmd = gen_cmd->add_subcommand("dense", "densest 4-in-9 mapping");
  gen_dense_cmd->add_option("--m", gd_m)->required();
  gen_dense_cmd->add_option("--n", gd_n)->required();
  gen_dense_cmd->add_option("--out", gd_out, "output file (stdout if omitted)");
  int gr_w = 5, gr_h = 5, gr_q = 0, gr_count = 1;
  std::uint64_t gr_seed = 1;
  std::string gr_dir = ".";
  auto* gen_random_cmd =
      gen_cmd->add_subcommand("random", "rejection-sampled valid topologies");
  gen_random_cmd->add_option("--width", gr_w)->required();
  gen_random_cmd->add_option("--height", gr_h)->required();
  gen_random_cmd->add_option("--qubits", gr_q)->required();
  gen_random_cmd->add_option("--count", gr_count);
  gen_random_cmd->add_option("--seed", gr_seed);
  gen_random_cmd->add_option("--out-dir", gr_dir);

  // validate
  std::string va_topology;
  auto* validate_cmd =
      app.add_subcommand("validate", "check the qubit-mapping constraints");
  validate_cmd->add_option("--topology", va_topology, "topology JSON file")
      ->required();

  // shared simulate/estimate/search options
  auto add_source_options = [](CLI::App* cmd, std::vector<std::string>* files,
                               std::string* dir, std::vector<int>* random,
                               std::vector<int>* dense) {
    cmd->add_option("--topology", *files, "topology JSON file(s)");
    cmd->add_option("--topology-dir", *dir, "directory of topology JSON files");
    cmd->add_option("--random", *random,
                    "generate topologies: WIDTH HEIGHT QUBITS COUNT")
        ->expected(4);
    cmd->add_option("--dense", *dense, "dense mapping: M N")->expected(2);
  };
  auto source_from_options = [](const std::vector<std::string>& files,
                                const std::string& dir,
                                const std::vector<int>& random,
                                const std::vector<int>& dense,
                                std::uint64_t seed) {
    TopologySource src;
    if (!files.empty()) {
      src.mode = "files";
      src.paths = files;
    } else if (!dir.empty()) {
      src.mode = "dir";
      src.dir = dir;
    } else if (!random.empty()) {
      src.mode = "random";
      src.width = random[0];
      src.height = random[1];
      src.qubits = random[2];
      src.count = random[3];
      src.seed = seed;
    } else if (!dense.empty()) {
      src.mode = "dense";
      src.m = dense[0];
      src.n = dense[1];
    }
    return src;
  };

  // simulate
  ExperimentConfig sim_cfg;
  sim_cfg.command = "simulate";
  std::string sim_out, sim_events_dir, sim_config_file;
  std::vector<std::string> sim_files;
  std::string sim_dir;
  std::vector<int> sim_random, sim_dense;
  unsigned sim_jobs = 0;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "run seeded clock-cycle simulations over topologies");
  simulate_cmd->add_option("--circuit", sim_cfg.circuit, "circuit (.qasm or .json)");
  add_source_options(simulate_cmd, &sim_files, &sim_dir, &sim_random, &sim_dense);
  simulate_cmd->add_option("--p-cr", sim_cfg.p_cr, "creation success probability");
  simulate_cmd->add_option("--p-cm", sim_cfg.p_cm, "measurement success probability");
  simulate_cmd->add_option("--trials", sim_cfg.trials, "trials per topology");
  simulate_cmd->add_option("--seed", sim_cfg.seed, "master seed");
  simulate_cmd->add_option("--deadlock-limit", sim_cfg.deadlock_limit);
  simulate_cmd->add_option("--w", sim_cfg.w);
  simulate_cmd->add_option("--format", sim_cfg.format)
      ->check(CLI::IsMember({"csv", "json"}));
  simulate_cmd->add_option("--out", sim_out, "report file (stdout if omitted)");
  simulate_cmd->add_option("--events-dir", sim_events_dir,
                           "write per-trial JSON-lines event logs here");
  simulate_cmd->add_option("--jobs", sim_jobs, "worker threads (0 = all cores)");
  simulate_cmd->add_option("--config", sim_config_file,
                           "load parameters from a config or report JSON");

  // estimate
  ExperimentConfig est_cfg;
  est_cfg.command = "estimate";
  std::string est_out, est_sim_csv, est_config_file;
  std::vector<std::string> est_files;
  std::string est_dir;
  std::vector<int> est_random, est_dense;
  auto* estimate_cmd = app.add_subcommand(
      "estimate", "evaluate topology-circuit affinity estimators");
  estimate_cmd->add_option("--circuit", est_cfg.circuit, "circuit (.qasm or .json)");
  add_source_options(estimate_cmd, &est_files, &est_dir, &est_random, &est_dense);
  estimate_cmd->add_option("--w", est_cfg.w, "combined-estimator weight");
  estimate_cmd->add_option("--seed", est_cfg.seed, "seed for --random sources");
  estimate_cmd->add_option("--sim", est_sim_csv,
                           "join a simulate CSV and append Pearson R rows");
  estimate_cmd->add_option("--format", est_cfg.format)
      ->check(CLI::IsMember({"csv", "json"}));
  estimate_cmd->add_option("--out", est_out, "report file (stdout if omitted)");
  estimate_cmd->add_option("--config", est_config_file,
                           "load parameters from a config or report JSON");

  // search
  ExperimentConfig search_cfg;
  search_cfg.command = "search";
  search_cfg.trials = 50;
  std::string search_out, search_keep_dir, search_config_file;
  std::vector<int> search_grid;
  unsigned search_jobs = 0;
  auto* search_cmd = app.add_subcommand(
      "search", "rank random topologies by the combined estimator");
  search_cmd->add_option("--circuit", search_cfg.circuit, "circuit (.qasm or .json)");
  search_cmd->add_option("--width", search_cfg.topology.width);
  search_cmd->add_option("--height", search_cfg.topology.height);
  search_cmd->add_option("--qubits", search_cfg.topology.qubits,
                         "defaults to the circuit's qubit count");
  search_cmd->add_option("--candidates", search_cfg.candidates);
  search_cmd->add_option("--keep", search_cfg.keep);
  search_cmd->add_option("--seed", search_cfg.seed);
  search_cmd->add_option("--w", search_cfg.w);
  search_cmd->add_option("--p-cr", search_cfg.p_cr);
  search_cmd->add_option("--trials", search_cfg.trials);
  search_cmd->add_flag("--then-simulate", search_cfg.then_simulate,
                       "simulate the kept picks and a random baseline");
  search_cmd->add_option("--baseline", search_cfg.baseline,
                         "baseline sample size for --then-simulate");
  search_cmd->add_option("--format", search_cfg.format)
      ->check(CLI::IsMember({"csv", "json"}));
  search_cmd->add_option("--out", search_out, "report file (stdout if omitted)");
  search_cmd->add_option("--keep-dir", search_keep_dir,
                         "write the kept topologies here");
  search_cmd->add_option("--jobs", search_jobs, "worker threads (0 = all cores)");
  search_cmd->add_option("--config", search_config_file,
                         "load parameters from a config or report JSON");

  std::vector<const char*> argv;
  argv.push_back("star");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (transpile_cmd->parsed()) return cmd_transpile(tr_input, tr_out);
    if (gen_cmd->parsed()) {
      if (gen_dense_cmd->parsed()) return cmd_gen_dense(gd_m, gd_n, gd_out);
      return cmd_gen_random(gr_w, gr_h, gr_q, gr_count, gr_seed, gr_dir);
    }
    if (validate_cmd->parsed()) return cmd_validate(va_topology);
    if (simulate_cmd->parsed()) {
      if (!sim_config_file.empty()) {
        ExperimentConfig base;
        base.command = "simulate";
        base.apply_json(load_json_file(sim_config_file));
        // explicit flags win over the loaded config
        if (!simulate_cmd->count("--circuit")) sim_cfg.circuit = base.circuit;
        if (!simulate_cmd->count("--p-cr")) sim_cfg.p_cr = base.p_cr;
        if (!simulate_cmd->count("--p-cm")) sim_cfg.p_cm = base.p_cm;
        if (!simulate_cmd->count("--trials")) sim_cfg.trials = base.trials;
        if (!simulate_cmd->count("--seed")) sim_cfg.seed = base.seed;
        if (!simulate_cmd->count("--deadlock-limit")) {
          sim_cfg.deadlock_limit = base.deadlock_limit;
        }
        if (!simulate_cmd->count("--format")) sim_cfg.format = base.format;
        sim_cfg.topology = base.topology;
      }
      const TopologySource src = source_from_options(sim_files, sim_dir, sim_random,
                                                     sim_dense, sim_cfg.seed);
      if (!src.mode.empty()) sim_cfg.topology = src;
      if (sim_cfg.topology.mode == "random") sim_cfg.topology.seed = sim_cfg.seed;
      if (sim_cfg.circuit.empty()) {
        throw CLI::ValidationError("--circuit is required");
      }
      return cmd_simulate(sim_cfg, sim_out, sim_events_dir, sim_jobs);
    }
    if (estimate_cmd->parsed()) {
      if (!est_config_file.empty()) {
        ExperimentConfig base;
        base.command = "estimate";
        base.apply_json(load_json_file(est_config_file));
        if (!estimate_cmd->count("--circuit")) est_cfg.circuit = base.circuit;
        if (!estimate_cmd->count("--w")) est_cfg.w = base.w;
        if (!estimate_cmd->count("--seed")) est_cfg.seed = base.seed;
        if (!estimate_cmd->count("--format")) est_cfg.format = base.format;
        est_cfg.topology = base.topology;
      }
      const TopologySource src = source_from_options(est_files, est_dir, est_random,
                                                     est_dense, est_cfg.seed);
      if (!src.mode.empty()) est_cfg.topology = src;
      if (est_cfg.topology.mode == "random") est_cfg.topology.seed = est_cfg.seed;
      if (est_cfg.circuit.empty()) {
        throw CLI::ValidationError("--circuit is required");
      }
      return cmd_estimate(est_cfg, est_sim_csv, est_out);
    }
    if (search_cmd->parsed()) {
      if (!search_config_file.empty()) {
        ExperimentConfig base;
        base.command = "search";
        base.apply_json(load_json_file(search_config_file));
        if (!search_cmd->count("--circuit")) search_cfg.circuit = base.circuit;
        if (!search_cmd->count("--width")) search_cfg.topology.width = base.topology.width;
        if (!search_cmd->count("--height")) search_cfg.topology.height = base.topology.height;
        if (!search_cmd->count("--qubits")) search_cfg.topology.qubits = base.topology.qubits;
        if (!search_cmd->count("--candidates")) search_cfg.candidates = base.candidates;
        if (!search_cmd->count("--keep")) search_cfg.keep = base.keep;
        if (!search_cmd->count("--seed")) search_cfg.seed = base.seed;
        if (!search_cmd->count("--w")) search_cfg.w = base.w;
        if (!search_cmd->count("--p-cr")) search_cfg.p_cr = base.p_cr;
        if (!search_cmd->count("--trials")) search_cfg.trials = base.trials;
        if (!search_cmd->count("--baseline")) search_cfg.baseline = base.baseline;
        if (!search_cmd->count("--then-simulate")) {
          search_cfg.then_simulate = base.then_simulate;
        }
        if (!search_cmd->count("--format")) search_cfg.format = base.format;
      }
      search_cfg.topology.mode = "random";
      search_cfg.topology.count = search_cfg.candidates;
      search_cfg.topology.seed = search_cfg.seed;
      if (search_cfg.circuit.empty() || search_cfg.topology.width < 1 ||
          search_cfg.topology.height < 1) {
        throw CLI::ValidationError("--circuit, --width and --height are required");
      }
      return cmd_search(search_cfg, search_out, search_keep_dir, search_jobs);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitContent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContent;
  }
  return kExitUsage;
}

}  // namespace star
