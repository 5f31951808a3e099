// Command-line front end. JSON goes to stdout, CSV to files, diagnostics to stderr.
// Exit status: 0 success, 2 bad input, 3 float classification too close to a wall.

#include <algorithm>
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbm/combinatorics.hpp"
#include "lbm/cyclic.hpp"
#include "lbm/dynamics.hpp"
#include "lbm/ibm.hpp"
#include "lbm/regions.hpp"
#include "lbm/stationary.hpp"

using json = nlohmann::ordered_json;
using namespace lbm;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitWall = 3;

struct Globals {
  bool exact = false;
  double tol = 1e-12;
  int jobs = 0;
  std::uint64_t seed = 7;
  std::string out;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

template <Scalar S>
std::vector<S> parse_list(const std::string& flag, const std::string& text) {
  std::vector<S> values;
  for (const std::string& token : split(text, ',')) {
    try {
      values.push_back(parse_scalar<S>(token));
    } catch (const std::exception& e) {
      throw std::invalid_argument(flag + ": malformed number '" + token + "'");
    }
  }
  return values;
}

template <Scalar S>
json num(const S& x) {
  if constexpr (is_exact_v<S>) {
    return to_string(x);
  } else {
    return x;
  }
}

template <Scalar S>
json num_list(const std::vector<S>& xs) {
  json arr = json::array();
  for (const S& x : xs) arr.push_back(num(x));
  return arr;
}

json edges_json(const EdgeSet& edges) {
  json arr = json::array();
  for (const Edge& e : edges) arr.push_back({e.i, e.j});
  return arr;
}

json graph_json(const DCGraph& g) {
  return {{"n", g.n()}, {"edges", edges_json(g.edges())}, {"dyck", dc_to_dyck(g).word()}, {"id", canonical_index(g)},
          {"connected", g.connected()}};
}

json order_json(const CyclicOrder& z) { return z.order(); }

// Number from a JSON document: strings go through the rational parser, exact
// mode reads binary numbers through their shortest decimal form.
template <Scalar S>
S json_scalar(const json& v, const std::string& where) {
  if (v.is_string()) return parse_scalar<S>(v.get<std::string>());
  if (!v.is_number()) throw std::invalid_argument(where + ": expected a number, got " + v.dump());
  if constexpr (is_exact_v<S>) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    return decimal_from_double(v.get<double>());
  } else {
    return v.get<double>();
  }
}

template <Scalar S>
std::vector<S> json_list(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw std::invalid_argument("config: '" + key + "' must be an array");
  std::vector<S> out;
  for (std::size_t k = 0; k < doc[key].size(); ++k) out.push_back(json_scalar<S>(doc[key][k], key + "[" + std::to_string(k) + "]"));
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct ParamsInput {
  std::string a, p, file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--a", a, "Thresholds a_1 < ... < a_N, comma separated");
    cmd->add_option("--p", p, "Rates p_1, ..., p_N, comma separated");
    cmd->add_option("--params", file, "JSON file with keys a and p");
  }

  template <Scalar S>
  Params<S> get() const {
    if (!file.empty()) {
      if (!a.empty() || !p.empty()) throw std::invalid_argument("--params excludes --a and --p");
      const json doc = read_json_file(file);
      return Params<S>(json_list<S>(doc, "a"), json_list<S>(doc, "p"));
    }
    if (a.empty() || p.empty()) throw std::invalid_argument("parameters need --a and --p (or --params)");
    return Params<S>(parse_list<S>("--a", a), parse_list<S>("--p", p));
  }
};

void emit(const json& doc, const Globals& g) {
  if (g.out.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::invalid_argument("cannot write '" + g.out + "'");
  f << doc.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write '" + path + "'");
  return f;
}

DCGraph read_graph(const std::string& text) {
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) return dyck_to_dc(DyckPath(text));
  std::ifstream in(text);
  if (!in) throw std::invalid_argument("graph '" + text + "' is neither a Dyck word nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return DCGraph::from_json(ss.str());
}

// ---- subcommands ----

template <Scalar S>
int cmd_simulate(const Globals& g, const std::string& config, const std::string& t_text, const std::string& trace) {
  const json doc = read_json_file(config);
  const Params<S> params(json_list<S>(doc, "a"), json_list<S>(doc, "p"));
  if (!doc.contains("bins") || !doc["bins"].is_object()) throw std::invalid_argument("config: 'bins' object missing");
  BinConfig<S> x;
  if (!doc["bins"].contains("front") || !doc["bins"]["front"].is_number_integer()) {
    throw std::invalid_argument("config: bins.front must be an integer");
  }
  x.front = doc["bins"]["front"].get<long long>();
  x.volumes = json_list<S>(doc["bins"], "volumes");
  x.validate(params);
  S t;
  try {
    t = parse_scalar<S>(t_text);
  } catch (const std::exception&) {
    throw std::invalid_argument("--t: malformed number '" + t_text + "'");
  }
  if (t < 0) throw std::invalid_argument("--t must be nonnegative, got '" + t_text + "'");
  const BinStep<S> step = evolve_bins(x, params, t);
  if (!trace.empty()) {
    std::ofstream f = open_out(trace);
    write_trace_csv(f, step.events, params);
  }
  const CarConfig<S> cars = sigma(step.config, params);
  emit({{"t", num(t)},
        {"bins", {{"front", step.config.front}, {"volumes", num_list(step.config.volumes)}}},
        {"cursors", cursors(step.config, params)},
        {"cars", {{"lead", cars.lead}, {"positions", num_list(cars.positions)}}},
        {"events", step.events.size()}},
       g);
  return 0;
}

template <Scalar S>
int cmd_speed(const Globals& g, const Params<S>& params) {
  const SolveReport<S> r = fixed_point_solve(params, g.tol);
  json doc = {{"z", num_list(r.profile.z)},
              {"speed", num(r.profile.speed())},
              {"iterations", r.iterations},
              {"certified_error", r.certified_error},
              {"converged", r.converged}};
  if (r.graph) doc["graph"] = dc_to_dyck(*r.graph).word();
  emit(doc, g);
  return r.converged ? 0 : 1;
}

template <Scalar S>
int cmd_classify(const Globals& g, const Params<S>& params) {
  const RegionReport<S> r = classify(params);
  emit({{"graph", graph_json(r.graph)},
        {"z", num_list(r.z)},
        {"speed", num(r.speed)},
        {"verified", r.verified},
        {"boundary_flags", edges_json(r.boundary_flags)},
        {"ambiguous", r.ambiguous}},
       g);
  return r.ambiguous ? kExitWall : 0;
}

template <Scalar S>
int cmd_sweep(const Globals& g, const std::vector<std::string>& fixed, const std::vector<std::string>& vary,
              const std::string& p_total) {
  SweepSpec<S> spec;
  auto index_of = [](const std::string& name) {
    if (name.size() < 2 || (name[0] != 'a' && name[0] != 'p')) throw std::invalid_argument("bad coordinate name '" + name + "'");
    try {
      std::size_t used = 0;
      const int i = std::stoi(name.substr(1), &used);
      if (used + 1 != name.size()) throw std::invalid_argument("");
      return i;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad coordinate name '" + name + "'");
    }
  };
  for (const std::string& item : fixed) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--fixed: expected name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    spec.n = std::max(spec.n, index_of(name));
    spec.fixed[name] = parse_list<S>("--fixed", item.substr(eq + 1)).at(0);
  }
  for (const std::string& item : vary) {
    spec.axes.push_back(parse_axis<S>(item));
    spec.n = std::max(spec.n, index_of(spec.axes.back().name));
  }
  if (!p_total.empty()) spec.p_total = parse_list<S>("--p-total", p_total).at(0);
  const auto records = sweep_parallel(spec, g.jobs);
  if (g.out.empty()) {
    write_sweep_csv(std::cout, spec, records);
  } else {
    std::ofstream f = open_out(g.out);
    write_sweep_csv(f, spec, records);
  }
  return 0;
}

int cmd_enumerate(const Globals& g, int n) {
  json arr = json::array();
  for (const DCGraph& graph : enumerate_dc(n)) arr.push_back(graph_json(graph));
  emit(arr, g);
  return 0;
}

json adjacency_json(const DCGraph& g1, const DCGraph& g2) {
  const Adjacency adj = regions_adjacent(g1, g2);
  json doc = {{"g1", dc_to_dyck(g1).word()},
              {"g2", dc_to_dyck(g2).word()},
              {"adjacent", adj.adjacent},
              {"codim", adj.codim ? json(*adj.codim) : json(nullptr)},
              {"symmetric_difference", edges_json(symmetric_difference(g1, g2))},
              {"covers", stanley_covers(g1, g2) || stanley_covers(g2, g1)}};
  return doc;
}

int cmd_adjacency(const Globals& g, const std::string& g1, const std::string& g2, int n) {
  if (!g1.empty() || !g2.empty()) {
    if (g1.empty() || g2.empty()) throw std::invalid_argument("adjacency needs both --g1 and --g2");
    emit(adjacency_json(read_graph(g1), read_graph(g2)), g);
    return 0;
  }
  if (n < 1) throw std::invalid_argument("adjacency needs --g1/--g2 or --n");
  const std::vector<DCGraph> all = enumerate_dc(n);
  json arr = json::array();
  for (std::size_t x = 0; x < all.size(); ++x) {
    for (std::size_t y = x + 1; y < all.size(); ++y) {
      if (regions_adjacent(all[x], all[y]).adjacent) arr.push_back(adjacency_json(all[x], all[y]));
    }
  }
  emit(arr, g);
  return 0;
}

template <Scalar S>
int cmd_cyclic(const Globals& g, const Params<S>& params) {
  const RegionReport<S> r = classify(params);
  try {
    const CyclicOrder z = jump_order(params);
    emit({{"order", order_json(z)}, {"graph", graph_json(r.graph)}, {"f_map", dc_to_dyck(f_map(z)).word()}}, g);
  } catch (const DisconnectedGraphError& e) {
    throw std::invalid_argument(std::string("stationary graph ") + dc_to_dyck(e.graph()).word() + " is disconnected");
  } catch (const SimultaneousJumpError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitWall;
  }
  return 0;
}

int cmd_extensions(const Globals& g, const std::string& graph_text) {
  const DCGraph graph = read_graph(graph_text);
  if (!graph.connected()) throw std::invalid_argument("graph " + dc_to_dyck(graph).word() + " is not connected");
  json chains = json::array();
  for (const ChainConstraint& c : zprime_chains(graph)) chains.push_back(c.tuple);
  json completed = json::array();
  for (const ChainConstraint& c : fiber_chains(graph)) completed.push_back(c.tuple);
  const std::vector<CyclicOrder> fiber = circular_extensions(graph);
  json exts = json::array();
  for (const CyclicOrder& z : fiber) exts.push_back(order_json(z));
  // orders allowed by the maximal-edge chains alone that f_map sends elsewhere
  json extra = json::array();
  for (const CyclicOrder& z : zprime_extensions(graph)) {
    if (std::find(fiber.begin(), fiber.end(), z) == fiber.end()) extra.push_back(order_json(z));
  }
  emit({{"graph", graph_json(graph)},
        {"chains", chains},
        {"fiber_chains", completed},
        {"count", exts.size()},
        {"extensions", exts},
        {"outside_fiber", extra}},
       g);
  return 0;
}

int cmd_conjecture(const Globals& g, int n, std::uint64_t budget) {
  const ProbeReport r = conjecture_probe_all(n, budget, g.seed, g.jobs);
  json buckets = json::array();
  for (const ProbeBucket& b : r.buckets) {
    json realized = json::array();
    for (const auto& [z, hits] : b.realized) realized.push_back({{"order", order_json(z)}, {"hits", hits}});
    json missing = json::array();
    for (const CyclicOrder& z : b.missing()) missing.push_back(order_json(z));
    json foreign = json::array();
    for (const auto& [z, hits] : b.foreign) foreign.push_back({{"order", order_json(z)}, {"hits", hits}});
    buckets.push_back({{"graph", dc_to_dyck(b.graph).word()},
                       {"extensions", b.extensions.size()},
                       {"hits", b.hits},
                       {"realized", realized},
                       {"missing", missing},
                       {"foreign", foreign},
                       {"covered", b.covered()}});
  }
  emit({{"n", r.n},
        {"seed", r.seed},
        {"budget", r.budget},
        {"disconnected", r.disconnected},
        {"skipped", r.skipped},
        {"all_covered", r.all_covered()},
        {"buckets", buckets}},
       g);
  return 0;
}

int cmd_ibm(const Globals& g, const Params<double>& params, const std::string& s_text, std::uint64_t steps) {
  const std::vector<double> s_values = parse_list<double>("--s", s_text);
  const HydroTable table = hydrolimit_check(params, s_values, steps, g.seed, g.jobs);
  auto write = [&](std::ostream& out) {
    out << "s,atoms,v_hat,ci95,s_times_v,liquid_speed,gap\n";
    for (const HydroRow& row : table.rows) {
      out << to_string(row.s) << ',' << row.atoms.to_string() << ',' << to_string(row.estimate.speed_estimate) << ','
          << to_string(row.estimate.ci95) << ',' << to_string(row.s_times_v) << ',' << to_string(row.liquid_speed) << ','
          << to_string(row.gap) << '\n';
    }
  };
  if (g.out.empty()) {
    write(std::cout);
  } else {
    std::ofstream f = open_out(g.out);
    write(f);
  }
  return 0;
}

template <typename F>
int dispatch(bool exact, F&& f) {
  return exact ? f(Rational{}) : f(double{});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liquid bin model: simulation, stationary speed, regions and cyclic orders"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* exact_flag = app.add_flag("--exact", g.exact, "Exact rational arithmetic");
  auto* tol_opt = app.add_option("--tol", g.tol, "Floating tolerance of the fixed-point solver")->check(CLI::PositiveNumber);
  exact_flag->excludes(tol_opt);
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out", g.out, "Output file");

  ParamsInput pin;

  std::string config, t_text, trace;
  auto* simulate = app.add_subcommand("simulate", "Evolve a bin configuration for time t");
  simulate->add_option("--params", config, "JSON with a, p and bins{front, volumes}")->required();
  simulate->add_option("--t", t_text, "Time horizon")->required();
  simulate->add_option("--trace", trace, "Event trace CSV");

  auto* speed = app.add_subcommand("speed", "Stationary profile and front speed");
  pin.add_to(speed);
  auto* classify_cmd = app.add_subcommand("classify", "Region of the parameter point");
  pin.add_to(classify_cmd);

  std::vector<std::string> fixed, vary;
  std::string p_total;
  auto* sweep = app.add_subcommand("sweep", "Classify a one- or two-dimensional grid (CSV)");
  sweep->add_option("--fixed", fixed, "name=value, comma separated")->delimiter(',');
  sweep->add_option("--vary", vary, "name=from:to:step, comma separated")->delimiter(',')->required();
  sweep->add_option("--p-total", p_total, "Implied p_N = total - sum of the other rates");

  int n = 0;
  auto* enumerate = app.add_subcommand("enumerate", "All DC graphs on n vertices");
  enumerate->add_option("--n", n)->required()->check(CLI::Range(1, 14));

  std::string g1, g2;
  int adj_n = 0;
  auto* adjacency = app.add_subcommand("adjacency", "Common boundary of two regions");
  adjacency->add_option("--g1", g1, "Dyck word or graph JSON file");
  adjacency->add_option("--g2", g2, "Dyck word or graph JSON file");
  adjacency->add_option("--n", adj_n, "List all adjacent pairs on n vertices")->check(CLI::Range(1, 9));

  auto* cyclic = app.add_subcommand("cyclic", "Stationary cursor jump order");
  pin.add_to(cyclic);

  std::string graph_text;
  auto* extensions = app.add_subcommand("extensions", "Circular extensions of the partial cyclic order of a graph");
  extensions->add_option("--graph", graph_text, "Dyck word or graph JSON file")->required();

  int probe_n = 0;
  std::uint64_t budget = 100000;
  auto* conjecture = app.add_subcommand("conjecture", "Probe which circular extensions are realized");
  conjecture->add_option("--n", probe_n)->required()->check(CLI::Range(1, 9));
  conjecture->add_option("--budget", budget, "Number of random parameter samples");

  std::string s_text = "20,50,200";
  std::uint64_t steps = 1000000;
  auto* ibm = app.add_subcommand("ibm", "Infinite bin model against the liquid speed (CSV)");
  pin.add_to(ibm);
  ibm->add_option("--s", s_text, "Scale factors, comma separated");
  ibm->add_option("--steps", steps, "Measured steps per scale")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*simulate) {
      return dispatch(g.exact, [&]<typename S>(S) { return cmd_simulate<S>(g, config, t_text, trace); });
    }
    if (*speed) return dispatch(g.exact, [&]<typename S>(S) { return cmd_speed<S>(g, pin.get<S>()); });
    if (*classify_cmd) return dispatch(g.exact, [&]<typename S>(S) { return cmd_classify<S>(g, pin.get<S>()); });
    if (*sweep) return dispatch(g.exact, [&]<typename S>(S) { return cmd_sweep<S>(g, fixed, vary, p_total); });
    if (*enumerate) return cmd_enumerate(g, n);
    if (*adjacency) return cmd_adjacency(g, g1, g2, adj_n);
    if (*cyclic) return dispatch(g.exact, [&]<typename S>(S) { return cmd_cyclic<S>(g, pin.get<S>()); });
    if (*extensions) return cmd_extensions(g, graph_text);
    if (*conjecture) return cmd_conjecture(g, probe_n, budget);
    if (*ibm) {
      if (g.exact) throw std::invalid_argument("ibm runs in floating mode only");
      return cmd_ibm(g, pin.get<double>(), s_text, steps);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
