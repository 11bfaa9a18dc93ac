//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "stellar/cli.hpp"

#include "stellar/encodings.hpp"
#include "stellar/mll.hpp"
#include "stellar/text_format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace stellar::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input;
  std::string source;  // inline, overrides input
  std::string colours;
  int fuel = 64;
  bool tree = false;
  bool general = false;
  std::string format = "text";
  unsigned seed = 0;
  bool verbatim = false;
  int width = 0, height = 0;
  std::size_t limit = 16;
  int steps = 10;
  int grow = 0;
};

std::string read_input(const Config& c) {
  if (!c.source.empty()) return c.source;
  if (c.input.empty()) throw UsageError("no input: give a path, '-' or -e SOURCE");
  std::ostringstream ss;
  if (c.input == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(c.input);
  if (!f) throw std::runtime_error("cannot read " + c.input);
  ss << f.rdbuf();
  return ss.str();
}

// --colors a,b; by default every colour of the input.
ColourSet colours_of(const Config& c, const Constellation& sigma) {
  auto sig = sigma.signature();
  if (c.colours.empty()) return sig.colours();
  ColourSet out;
  std::stringstream ss(c.colours);
  for (std::string name; std::getline(ss, name, ',');) {
    name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
    if (name.empty()) continue;
    if (!sig.is_colour(name)) throw UsageError("colour '" + name + "' is not in the signature");
    out.insert(name);
  }
  return out;
}

int exit_of(ExecStatus s) {
  switch (s) {
    case ExecStatus::complete: return exit_ok;
    case ExecStatus::divergent: return exit_failure;
    case ExecStatus::fuel_exhausted: return exit_unknown;
  }
  return exit_unknown;
}

std::string diagram_text(const Diagram& d) {
  std::string s = "vertices";
  for (std::size_t v = 0; v < d.size(); ++v) s += " " + std::to_string(v) + ":" + std::to_string(d.vertex_star[v]);
  s += "; edges";
  if (d.edges.empty()) s += " none";
  for (const auto& e : d.edges)
    s += " " + std::to_string(e.u) + "." + std::to_string(e.su) + "-" + std::to_string(e.v) + "." + std::to_string(e.sv);
  return s;
}

void print_certificate(std::ostream& out, const DivergenceCertificate& c) {
  out << "# certificate: " << c.reason << "\n# diagram: " << diagram_text(c.diagram) << "\n";
  if (c.pumped_from >= 0) out << "# pumped: vertex " << c.pumped_from << " into " << c.pumped_to << "\n";
}

void print_execution(std::ostream& out, const Config& c, const Constellation& sigma, const ExecutionResult& r) {
  if (c.format == "json") {
    out << to_json(r).dump(2) << "\n";
    return;
  }
  if (c.format == "dot") {
    for (const auto& d : r.diagrams) out << to_dot(d, sigma);
    if (r.certificate) out << to_dot(r.certificate->diagram, sigma);
    return;
  }
  out << serialize(r.output);
  out << "# status: " << to_string(r.status) << "\n";
  for (std::size_t k = 0; k < r.diagrams.size(); ++k) out << "# star " << k << ": " << diagram_text(r.diagrams[k]) << "\n";
  if (r.certificate) print_certificate(out, *r.certificate);
}

ExecOptions exec_options(const Config& c, ColourSet colours, bool tree_default) {
  ExecOptions o;
  o.colours = std::move(colours);
  o.fuel = c.fuel;
  o.tree_only = c.tree ? true : c.general ? false : tree_default;
  return o;
}

void no_dot(const Config& c) {
  if (c.format == "dot") throw UsageError("--format dot is not available for this command");
}

// --- commands ---------------------------------------------------------------

int cmd_exec(const Config& c, std::ostream& out) {
  auto sigma = parse_constellation(read_input(c));
  auto r = execute(sigma, exec_options(c, colours_of(c, sigma), false));
  print_execution(out, c, sigma, r);
  return exit_of(r.status);
}

int cmd_graph(const Config& c, std::ostream& out) {
  auto sigma = parse_constellation(read_input(c));
  auto g = unification_graph(sigma, colours_of(c, sigma));
  if (c.format == "dot") {
    out << to_dot(g, sigma);
  } else if (c.format == "json") {
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back({e.u, e.su, e.v, e.sv});
    out << json{{"vertices", g.vertex_count}, {"edges", edges}}.dump(2) << "\n";
  } else {
    out << "vertices " << g.vertex_count << "\n";
    for (const auto& e : g.edges) out << e.u << "." << e.su << " -- " << e.v << "." << e.sv << "\n";
  }
  return exit_ok;
}

std::string node_name(const mll::ProofStructure& s, int n) {
  int nv = static_cast<int>(s.labels.size());
  if (n < nv) return "v" + std::to_string(n) + ":" + s.labels[n].to_string();
  return std::string(mll::to_string(s.links[n - nv].kind)) + std::to_string(n - nv);
}

// A cycle of the correction graph as a node sequence, first node repeated.
std::vector<int> find_cycle(const mll::CorrectionGraph& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.nodes);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    adj[g.edges[i].first].emplace_back(g.edges[i].second, static_cast<int>(i));
    adj[g.edges[i].second].emplace_back(g.edges[i].first, static_cast<int>(i));
  }
  std::vector<int> parent(g.nodes, -1), via(g.nodes, -1), depth(g.nodes, -1);
  for (std::size_t root = 0; root < g.nodes; ++root) {
    if (depth[root] >= 0) continue;
    std::vector<int> stack{static_cast<int>(root)};
    depth[root] = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[u]) {
        if (e == via[u]) continue;
        if (depth[w] < 0) {
          depth[w] = depth[u] + 1;
          parent[w] = u;
          via[w] = e;
          stack.push_back(w);
          continue;
        }
        // Closing edge: walk both ends up to the common ancestor.
        std::vector<int> a{u}, b{w};
        while (a.back() != b.back()) {
          if (depth[a.back()] >= depth[b.back()]) a.push_back(parent[a.back()]);
          else b.push_back(parent[b.back()]);
        }
        b.pop_back();
        a.insert(a.end(), b.rbegin(), b.rend());
        a.push_back(u);
        return a;
      }
    }
  }
  return {};
}

std::string switching_text(const mll::Switching& sw) {
  std::string s;
  for (bool b : sw) s += b ? 'r' : 'l';
  return s.empty() ? "-" : s;
}

int cmd_mll_check(const Config& c, std::ostream& out) {
  auto s = mll::parse_structure(read_input(c));
  auto rep = mll::stellar_correct(s, c.fuel);
  bool dr = mll::dr_correct(s), mix = mll::mix_correct(s);

  // First switching whose correction graph is not a tree.
  std::optional<mll::Switching> bad;
  mll::CorrectionGraph bad_graph;
  for (const auto& sw : mll::all_switchings(s)) {
    auto g = mll::correction_graph(s, sw);
    if (!g.is_tree()) {
      bad = sw;
      bad_graph = g;
      break;
    }
  }
  std::vector<int> cycle = bad ? find_cycle(bad_graph) : std::vector<int>{};

  if (c.format == "dot") {
    out << mll::to_dot(mll::correction_graph(s, bad ? *bad : mll::all_switchings(s).front()), s);
  } else if (c.format == "json") {
    json sws = json::array();
    for (const auto& r : rep.switchings) {
      json j{{"switching", switching_text(r.switching)},
             {"tree_exec", to_json(r.tree_exec)},
             {"normalising", to_string(r.normalising)}};
      if (r.certificate) j["certificate"] = {{"reason", r.certificate->reason}, {"diagram", to_json(r.certificate->diagram)}};
      sws.push_back(std::move(j));
    }
    json j{{"verdict", mll::to_string(rep.verdict)},
           {"dr_correct", dr},
           {"mix_correct", mix},
           {"strongly_normalising", to_string(rep.strongly_normalising)},
           {"switchings", sws}};
    if (bad) {
      json cyc = json::array();
      for (int n : cycle) cyc.push_back(node_name(s, n));
      j["correction_certificate"] = {{"switching", switching_text(*bad)},
                                     {"cycle", cyc},
                                     {"connected", bad_graph.connected()}};
    }
    out << j.dump(2) << "\n";
  } else {
    out << "verdict: " << mll::to_string(rep.verdict) << "\n";
    out << "dr_correct: " << (dr ? "yes" : "no") << "\nmix_correct: " << (mix ? "yes" : "no") << "\n";
    out << "strongly_normalising: " << to_string(rep.strongly_normalising) << "\n";
    auto expected = canonical_string(mll::expected_conclusion_star(s));
    for (const auto& r : rep.switchings) {
      out << "switching " << switching_text(r.switching) << ": " << to_string(r.tree_exec.status) << ", output {";
      for (const auto& st : r.tree_exec.output) out << " " << canonical_string(st);
      out << " } expected " << expected << ", normalising " << to_string(r.normalising) << "\n";
      if (r.certificate) print_certificate(out, *r.certificate);
    }
    if (bad) {
      out << "certificate: switching " << switching_text(*bad);
      if (!cycle.empty()) {
        out << " has cycle";
        for (std::size_t i = 0; i < cycle.size(); ++i) out << (i ? " -- " : " ") << node_name(s, cycle[i]);
      } else {
        out << " is disconnected";
      }
      out << "\n";
    }
  }
  return rep.verdict == mll::NetVerdict::proof_net ? exit_ok
         : rep.verdict == mll::NetVerdict::not_proof_net ? exit_failure
                                                         : exit_unknown;
}

int cmd_mll_exec(const Config& c, std::ostream& out) {
  no_dot(c);
  auto s = mll::parse_structure(read_input(c));
  auto r = mll::exec_structure(s, c.fuel);
  auto nf = mll::vehicle(mll::normal_form(s));
  bool same = r.status == ExecStatus::complete && alpha_equivalent(r.output, nf);
  if (c.format == "json") {
    auto j = to_json(r);
    j["normal_form"] = serialize(nf);
    j["matches_normal_form"] = same;
    out << j.dump(2) << "\n";
  } else {
    out << serialize(r.output) << "# status: " << to_string(r.status) << "\n";
    out << "# normal form vehicle" << (nf.empty() ? ": empty" : "") << "\n" << serialize(nf);
    out << "# matches normal form: " << (same ? "yes" : "no") << "\n";
    if (r.certificate) print_certificate(out, *r.certificate);
  }
  if (r.status != ExecStatus::complete) return exit_of(r.status);
  return same ? exit_ok : exit_failure;
}

int cmd_tile(const Config& c, std::ostream& out) {
  no_dot(c);
  auto file = enc::parse_tiles(read_input(c));
  if (c.width <= 0 || c.height <= 0) {
    auto sigma = enc::encode_wang(file.tiles, c.verbatim);
    if (c.format == "json") out << constellation_to_json(sigma).dump(2) << "\n";
    else out << serialize(sigma);
    return exit_ok;
  }
  enc::RectangleSpec spec;
  spec.width = c.width;
  spec.height = c.height;
  spec.limit = c.limit;
  auto tilings = enc::tile_rectangle(file.tiles, spec, c.verbatim);
  if (c.format == "json") {
    json j = json::array();
    for (const auto& t : tilings) j.push_back(t);
    out << json{{"width", c.width}, {"height", c.height}, {"tilings", j}}.dump(2) << "\n";
  } else {
    out << "# " << tilings.size() << " tiling(s) of " << c.width << "x" << c.height
        << (tilings.size() == c.limit ? " (limit reached)" : "") << "\n";
    for (std::size_t k = 0; k < tilings.size(); ++k) {
      out << "tiling " << k << "\n";
      // Top row first.
      for (auto row = tilings[k].rbegin(); row != tilings[k].rend(); ++row) {
        for (std::size_t x = 0; x < row->size(); ++x) out << (x ? " " : "  ") << (*row)[x];
        out << "\n";
      }
    }
  }
  return tilings.empty() ? exit_failure : exit_ok;
}

int cmd_atam(const Config& c, std::ostream& out) {
  no_dot(c);
  auto file = enc::parse_tiles(read_input(c));
  enc::ATAMSystem sys{file.tiles, file.strength, file.temperature.value_or(1)};
  auto e = enc::encode_atam(sys, c.verbatim);
  if (c.grow <= 0) {
    if (c.format == "json") {
      out << json{{"constellation", constellation_to_json(e.constellation)},
                  {"first_ambiance", e.first_ambiance},
                  {"first_tile", e.first_tile},
                  {"first_plug", e.first_plug}}
                 .dump(2)
          << "\n";
    } else {
      out << serialize(e.constellation);
    }
    return exit_ok;
  }

  // Seeded random growth from tile 0 at the origin.
  std::mt19937 rng(c.seed);
  enc::Assembly a(sys, e, {0, 0, 0});
  const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
  while (static_cast<int>(a.placements().size()) < c.grow) {
    std::set<std::pair<int, int>> used, frontier;
    for (const auto& p : a.placements()) used.emplace(p.x, p.y);
    for (const auto& p : a.placements())
      for (int k = 0; k < 4; ++k)
        if (!used.count({p.x + dx[k], p.y + dy[k]})) frontier.emplace(p.x + dx[k], p.y + dy[k]);
    std::vector<enc::Placement> options;
    for (auto [x, y] : frontier)
      for (std::size_t t = 0; t < sys.tiles.tiles.size(); ++t) options.push_back({x, y, static_cast<int>(t)});
    std::shuffle(options.begin(), options.end(), rng);
    bool grown = false;
    for (const auto& p : options)
      if (a.try_attach(p)) {
        grown = true;
        break;
      }
    if (!grown) break;
  }
  auto cells = a.placements();
  std::sort(cells.begin(), cells.end());
  if (c.format == "json") {
    json j = json::array();
    for (const auto& p : cells) j.push_back({p.x, p.y, p.tile});
    out << json{{"seed", c.seed}, {"placements", j}, {"diagram", to_json(a.diagram())}}.dump(2) << "\n";
  } else {
    out << "# " << cells.size() << " tile(s), seed " << c.seed << "\n";
    for (const auto& p : cells) out << p.x << " " << p.y << " " << p.tile << "\n";
    out << "# diagram: " << diagram_text(a.diagram()) << "\n";
  }
  return exit_ok;
}

int cmd_resolve(const Config& c, std::ostream& out) {
  no_dot(c);
  auto prog = enc::parse_clauses(read_input(c));
  auto sigma = enc::encode_clauses(prog.clauses, prog.query);
  auto r = execute(sigma, exec_options(c, colours_of(c, sigma), false));
  if (!prog.query) {
    print_execution(out, c, sigma, r);
    return exit_of(r.status);
  }
  auto ans = enc::answers(r.output);
  if (c.format == "json") {
    out << json{{"status", to_string(r.status)}, {"answers", ans}}.dump(2) << "\n";
  } else {
    for (const auto& a : ans) out << a << "\n";
    out << "# status: " << to_string(r.status) << ", " << ans.size() << " answer(s)\n";
    if (r.certificate) print_certificate(out, *r.certificate);
  }
  if (r.status != ExecStatus::complete) return exit_of(r.status);
  return ans.empty() ? exit_failure : exit_ok;
}

std::string cell_text(const enc::TapeCell& cell) {
  return cell.state ? "[" + *cell.state + ":" + cell.symbol + "]" : cell.symbol;
}

int cmd_tm(const Config& c, std::ostream& out) {
  no_dot(c);
  auto file = enc::parse_turing(read_input(c));
  int width = static_cast<int>(file.input.size()) + c.steps + 2;
  std::vector<std::vector<enc::TapeCell>> rows;
  try {
    rows = enc::simulate_by_tiling(file.machine, file.input, c.steps, width, c.verbatim);
  } catch (const enc::EncodingError& e) {
    out << "# tiling failed: " << e.what() << "\n";
    return exit_failure;
  }
  auto trace = enc::run_turing(file.machine, file.input, c.steps);
  bool agree = rows.size() == trace.size();
  for (std::size_t t = 0; agree && t < rows.size(); ++t) {
    const auto& cfg = trace[t];
    for (int x = 0; x < width; ++x) {
      std::string sym = static_cast<std::size_t>(x) < cfg.tape.size() ? cfg.tape[x] : file.machine.blank;
      std::optional<std::string> st;
      if (static_cast<std::size_t>(x) == cfg.head) st = cfg.state;
      if (!(rows[t][x] == enc::TapeCell{st, sym})) agree = false;
    }
  }
  if (c.format == "json") {
    json j = json::array();
    for (const auto& row : rows) {
      json r = json::array();
      for (const auto& cell : row) r.push_back(cell_text(cell));
      j.push_back(r);
    }
    out << json{{"rows", j}, {"agrees_with_run", agree}}.dump(2) << "\n";
  } else {
    for (std::size_t t = 0; t < rows.size(); ++t) {
      out << t << ":";
      for (const auto& cell : rows[t]) out << " " << cell_text(cell);
      out << "\n";
    }
    out << "# " << rows.size() << " row(s); agrees with direct run: " << (agree ? "yes" : "no") << "\n";
  }
  return agree && !rows.empty() ? exit_ok : exit_failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stellar: execution of constellations and their encodings", "stellar"};
  app.require_subcommand(1, 1);
  Config cfg;

  struct Entry {
    const char* name;
    const char* help;
    std::function<int(const Config&, std::ostream&)> fn;
  };
  const std::vector<Entry> entries{
      {"exec", "execute a constellation", cmd_exec},
      {"graph", "unification graph", cmd_graph},
      {"mll-check", "correctness of a proof-structure", cmd_mll_check},
      {"mll-exec", "cut elimination by execution", cmd_mll_exec},
      {"tile", "Wang tiles: encoding or rectangle tilings", cmd_tile},
      {"atam", "aTAM: encoding or seeded assembly", cmd_atam},
      {"resolve", "clause program answers", cmd_resolve},
      {"tm", "Turing machine by space-time tiling", cmd_tm},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("input", cfg.input, "input path, '-' for stdin");
    sub->add_option("-e,--source", cfg.source, "inline source");
    sub->add_option("--colors", cfg.colours, "comma-separated colour names");
    sub->add_option("--fuel", cfg.fuel, "maximum diagram size")->check(CLI::PositiveNumber);
    auto* tree = sub->add_flag("--tree", cfg.tree, "tree-like diagrams only");
    sub->add_flag("--general", cfg.general, "diagrams with cycles")->excludes(tree);
    sub->add_option("--format", cfg.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--seed", cfg.seed, "seed for randomised choices");
    sub->add_flag("--paper-verbatim", cfg.verbatim, "printed star shapes instead of the corrected ones");
    if (std::string(e.name) == "tile") {
      sub->add_option("--width", cfg.width)->check(CLI::PositiveNumber);
      sub->add_option("--height", cfg.height)->check(CLI::PositiveNumber);
      sub->add_option("--limit", cfg.limit, "stop after this many tilings")->check(CLI::PositiveNumber);
    }
    if (std::string(e.name) == "tm") sub->add_option("--steps", cfg.steps)->check(CLI::NonNegativeNumber);
    if (std::string(e.name) == "atam") sub->add_option("--grow", cfg.grow, "grow up to N tiles")->check(CLI::PositiveNumber);
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "stellar: " << e.what() << "\n";
    return exit_error;
  }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return entries[i].fn(cfg, out);
    } catch (const ParseError& e) {
      err << "stellar: parse error: " << e.what() << "\n";
    } catch (const std::exception& e) {
      err << "stellar: " << e.what() << "\n";
    }
    return exit_error;
  }
  return exit_error;
}

}  // namespace stellar::cli
