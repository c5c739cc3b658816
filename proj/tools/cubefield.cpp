// Copyright 2026 The cubefield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cubefield: generate, validate, check, sweep and report on cube complexes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cubefield/checks.hpp"
#include "cubefield/complex.hpp"
#include "cubefield/deformation.hpp"
#include "cubefield/format.hpp"
#include "cubefield/fredholm.hpp"
#include "cubefield/generators.hpp"

namespace {

using cubefield::ComplexError;
using cubefield::CubeComplex;
using cubefield::TimeParam;
using nlohmann::ordered_json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
  std::string t_grid = "0.001,0.01,0.1,1,inf";
  std::vector<std::string> tol;
  // gen
  std::string kind;
  std::size_t leaves = 3;
  std::size_t depth = 1;
  std::string dims = "1";
  std::size_t dim = 2;
  std::size_t n = 8;
  std::size_t k = 12;
  // check
  std::string suite;
  // sweep
  std::string pairs = "all";
  // report
  bool weighted = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + cfg.out + "'");
  out << text;
}

CubeComplex load(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("--input is required");
  return cubefield::parse_complex(read_file(cfg.input));
}

std::vector<TimeParam> grid_of(const RunConfig& cfg) {
  std::vector<TimeParam> g;
  try {
    g = cubefield::parse_grid(cfg.t_grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (auto t : g) {
    if (t.is_zero()) throw UsageError("t grid must not contain 0; the t=0 rows come from symbols");
  }
  return g;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad --dims '" + s + "'");
    }
    if (used != tok.size() || v < 1) throw UsageError("bad --dims '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("bad --dims '" + s + "'");
  return out;
}

int cmd_gen(const RunConfig& cfg) {
  CubeComplex x = [&] {
    try {
      if (cfg.kind == "tree") return cubefield::make_tree(cfg.leaves, cfg.depth);
      if (cfg.kind == "grid") return cubefield::make_grid(parse_dims(cfg.dims));
      if (cfg.kind == "cube") return cubefield::make_cube(cfg.dim);
      if (cfg.kind == "random-median") {
        if (cfg.n < 1 || cfg.k < 1) throw UsageError("random-median needs --n, --k >= 1");
        return cubefield::make_random_median(cfg.n, cfg.k, cfg.seed);
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    throw UsageError("unknown generator '" + cfg.kind + "'");
  }();
  emit(cfg, cubefield::write_complex(x));
  return kPass;
}

int cmd_validate(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("--input is required");
  const std::string text = read_file(cfg.input);
  std::ostringstream os;
  try {
    const CubeComplex x = cubefield::parse_complex(text);
    os << "valid: yes\n";
    os << "vertices " << x.n_vertices() << "\n";
    os << "hyperplanes " << x.n_hyperplanes() << "\n";
    os << "dimension " << x.dimension() << "\n";
    os << "cubes";
    for (std::size_t q = 0; q <= x.dimension(); ++q) os << " " << x.n_cubes(q);
    os << "\n";
    os << "bounded_geometry " << x.bounded_geometry() << "\n";
    os << "connected: ok\n";
    os << "median: ok\n";
    emit(cfg, os.str());
    return kPass;
  } catch (const ComplexError& e) {
    os << "valid: no\n";
    os << "reason " << cubefield::kind_name(e.kind()) << ": " << e.what() << "\n";
    if (e.kind() == ComplexError::Kind::kConnectivity) os << "connected: fail\n";
    if (e.kind() == ComplexError::Kind::kMedianClosure) os << "median: fail\n";
    emit(cfg, os.str());
    return kFail;
  }
}

ordered_json check_json(const cubefield::CheckResult& r) {
  ordered_json j;
  j["name"] = r.name;
  j["residual"] = r.residual;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  if (!r.values.empty()) j["values"] = r.values;
  return j;
}

int cmd_check(const RunConfig& cfg) {
  cubefield::Tolerances tol;
  try {
    for (const auto& t : cfg.tol) tol.parse(t);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto& names = cubefield::suite_names();
  if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
    throw UsageError("unknown suite '" + cfg.suite + "'");
  }
  const CubeComplex x = load(cfg);
  const auto results = cubefield::run_suite(cfg.suite, x, tol);
  for (const auto& n : tol.names()) {
    bool known = false;
    for (const auto& r : results) known = known || r.name == n;
    if (!known) throw UsageError("no check named '" + n + "' in suite " + cfg.suite);
  }
  bool pass = true;
  ordered_json doc;
  doc["schema"] = 1;
  doc["command"] = "check";
  doc["suite"] = cfg.suite;
  doc["checks"] = ordered_json::array();
  for (const auto& r : results) {
    pass = pass && r.pass;
    doc["checks"].push_back(check_json(r));
  }
  doc["pass"] = pass;
  emit(cfg, doc.dump(2) + "\n");
  return pass ? kPass : kFail;
}

std::vector<std::pair<cubefield::BasicSection, cubefield::BasicSection>> select_pairs(
    const CubeComplex& x, const std::string& selector) {
  std::vector<std::pair<cubefield::BasicSection, cubefield::BasicSection>> out;
  if (selector.empty() || selector == "none") return out;
  std::vector<std::vector<cubefield::BasicSection>> frames;
  for (std::size_t q = 0; q <= x.dimension(); ++q) frames.push_back(cubefield::basic_frame(x, q));
  if (selector == "all" || selector == "diag") {
    for (const auto& f : frames)
      for (const auto& a : f)
        for (const auto& b : f)
          if (selector == "all" || cubefield::section_key(a) == cubefield::section_key(b))
            out.emplace_back(a, b);
    return out;
  }
  std::map<std::string, const cubefield::BasicSection*> by_key;
  for (const auto& f : frames)
    for (const auto& a : f) by_key.emplace(cubefield::section_key(a), &a);
  std::stringstream ss(selector);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto at = item.find('@');
    if (at == std::string::npos) throw UsageError("pair '" + item + "' is not ROW@COL");
    auto a = by_key.find(item.substr(0, at));
    auto b = by_key.find(item.substr(at + 1));
    if (a == by_key.end() || b == by_key.end()) throw UsageError("unknown section in '" + item + "'");
    if (a->second->q() != b->second->q()) throw UsageError("degrees differ in '" + item + "'");
    out.emplace_back(*a->second, *b->second);
  }
  return out;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto grid = grid_of(cfg);
  const CubeComplex x = load(cfg);
  const cubefield::SymbolTable table(x);
  const auto pairs = select_pairs(x, cfg.pairs);
  std::ostringstream os;
  os << "t,row_key,col_key,value\n";
  std::vector<cubefield::PairingSweep> sweeps;
  for (const auto& [a, b] : pairs) sweeps.push_back(cubefield::pairing_sweep(table, a, b, grid));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    os << "0," << cubefield::section_key(pairs[i].first) << ","
       << cubefield::section_key(pairs[i].second) << "," << cubefield::format_number(sweeps[i].limit)
       << "\n";
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      os << grid[k].to_string() << "," << cubefield::section_key(pairs[i].first) << ","
         << cubefield::section_key(pairs[i].second) << ","
         << cubefield::format_number(sweeps[i].values[k]) << "\n";
    }
  }
  emit(cfg, os.str());
  return kPass;
}

int cmd_report(const RunConfig& cfg) {
  const auto grid = grid_of(cfg);
  const CubeComplex x = load(cfg);
  const cubefield::Field field(x);
  ordered_json doc;
  doc["schema"] = 1;
  doc["command"] = "report";
  doc["weighted"] = cfg.weighted;
  ordered_json cx;
  cx["vertices"] = x.n_vertices();
  cx["hyperplanes"] = x.n_hyperplanes();
  cx["dimension"] = x.dimension();
  cx["basepoint"] = x.base().to_string();
  ordered_json cubes = ordered_json::array();
  for (std::size_t q = 0; q <= x.dimension(); ++q) cubes.push_back(x.n_cubes(q));
  cx["cubes"] = cubes;
  doc["complex"] = cx;
  doc["lambdas"] = cubefield::report_lambdas();
  doc["cells"] = ordered_json::array();
  for (auto t : grid) {
    const auto r = cubefield::fredholm_cell_report(field, t, cfg.weighted);
    ordered_json c;
    c["t"] = t.to_string();
    c["fredholm_residual"] = r.fredholm_residual;
    c["homotopy_residual"] = r.homotopy_residual;
    c["resolvent_bounds"] = r.resolvent_bounds;
    c["basepoint_norms"] = r.basepoint_norms;
    c["spectra"] = r.spectra;
    doc["cells"].push_back(c);
  }
  emit(cfg, doc.dump(2) + "\n");
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubefield: cube complex deformation toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen", "Generate a complex in cxc format");
  gen->add_option("kind", cfg.kind, "tree | grid | cube | random-median")->required();
  gen->add_option("--leaves", cfg.leaves, "tree legs");
  gen->add_option("--depth", cfg.depth, "edges per tree leg");
  gen->add_option("--dims", cfg.dims, "grid side lengths, e.g. 2x1");
  gen->add_option("--dim", cfg.dim, "cube dimension");
  gen->add_option("--n", cfg.n, "random-median hyperplanes");
  gen->add_option("--k", cfg.k, "random-median seed vertices");
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--out", cfg.out, "output file");

  auto* validate = app.add_subcommand("validate", "Validate a cxc file");
  validate->add_option("--input,input", cfg.input, "cxc file");
  validate->add_option("--out", cfg.out, "output file");

  auto* check = app.add_subcommand("check", "Run an invariant suite");
  check->add_option("suite", cfg.suite, "jv | ps | parallel | field | fredholm")->required();
  check->add_option("--input", cfg.input, "cxc file");
  check->add_option("--tol", cfg.tol, "name=value or a bare value for every numeric check");
  check->add_option("--seed", cfg.seed, "unused; accepted for uniformity");
  check->add_option("--out", cfg.out, "JSON output file");

  auto* sweep = app.add_subcommand("sweep", "Pairing sweep of basic sections as CSV");
  sweep->add_option("--input", cfg.input, "cxc file");
  sweep->add_option("--t", cfg.t_grid, "comma-separated t grid, 'inf' allowed");
  sweep->add_option("--pairs", cfg.pairs, "all | diag | none | ROW@COL,...");
  sweep->add_option("--out", cfg.out, "CSV output file");

  auto* report = app.add_subcommand("report", "Fredholm report as JSON");
  report->add_option("--input", cfg.input, "cxc file");
  report->add_option("--t", cfg.t_grid, "comma-separated t grid, 'inf' allowed");
  report->add_flag("--weighted", cfg.weighted, "use the weights w_t");
  report->add_option("--out", cfg.out, "JSON output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(cfg);
    if (*validate) return cmd_validate(cfg);
    if (*check) return cmd_check(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*report) return cmd_report(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ComplexError& e) {
    std::cerr << "invalid complex (" << cubefield::kind_name(e.kind()) << "): " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
