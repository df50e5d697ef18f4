#include "pidkit/cli.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pidkit/distribution_io.hpp"
#include "pidkit/error.hpp"

namespace pidkit::cli {

namespace {

using nlohmann::json;

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  return fmt::format("{:.12g}", x);
}

std::string short_digest(const std::string& digest) { return digest.size() > 12 ? digest.substr(0, 12) : digest; }

std::string display_name(std::string_view measure_id) {
  if (measure_id == "imin") return "I_min";
  if (measure_id == "isx") return "I^sx";
  return std::string(measure_id);
}

struct Source {
  std::string gate;
  std::string input;
  std::string emit;
};

void add_source_options(CLI::App* cmd, Source& s) {
  auto* gate = cmd->add_option("--gate", s.gate, "Built-in gate id (see `pidkit gate --list`)");
  auto* input = cmd->add_option("--input", s.input, "Distribution JSON file");
  gate->excludes(input);
  cmd->add_option("--emit", s.emit, "Also write the input distribution as JSON to this file");
}

JointDistribution load_source(const Source& s) {
  if (s.gate.empty() && s.input.empty()) throw InputError("one of --gate or --input is required");
  auto d = s.gate.empty() ? load_distribution(s.input) : make_gate(s.gate);
  if (!s.emit.empty()) save_distribution(d, s.emit);
  return d;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Expectations: {"<measure id>": {"<property>": "pass|fail|vacuous", ...}, ...}
using Expectations = std::map<std::string, std::map<PropertyId, Verdict>>;

Expectations load_expectations(const std::string& path) {
  const auto j = load_json_file(path);
  if (!j.is_object()) throw InputError(path + ": expected an object keyed by measure id");
  Expectations out;
  for (const auto& [measure, row] : j.items()) {
    if (!row.is_object()) throw InputError(path + ": entry '" + measure + "' must be an object");
    for (const auto& [prop, verdict] : row.items()) {
      if (!verdict.is_string()) throw InputError(path + ": " + measure + "." + prop + " must be a string");
      out[measure][parse_property(prop)] = parse_verdict(verdict.get<std::string>());
    }
  }
  return out;
}

std::optional<Verdict> expected(const Expectations& e, const std::string& measure, PropertyId p) {
  const auto row = e.find(measure);
  if (row == e.end()) return std::nullopt;
  const auto cell = row->second.find(p);
  if (cell == row->second.end()) return std::nullopt;
  return cell->second;
}

PropertyReport vacuous(PropertyId id, std::string_view measure_id, double tol, std::string note) {
  PropertyReport r;
  r.property = id;
  r.verdict = Verdict::vacuous;
  r.measure_id = std::string(measure_id);
  r.tolerance = tol;
  r.note = std::move(note);
  return r;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0)) throw InputError("--tol must be positive");
}

// ---- atoms ----------------------------------------------------------------

struct AtomsConfig {
  Source source;
  std::string measure = "imin";
  double tol = kDefaultTolerance;
  std::string format = "text";
  bool allow_large = false;
};

int cmd_atoms(const AtomsConfig& c, std::ostream& out) {
  check_tolerance(c.tol);
  const auto d = load_source(c.source);
  const auto m = MeasureRegistry::builtin().get(c.measure);
  const auto p = atoms_from_redundancy(d, *m, LatticeLimit{c.allow_large});
  const auto consistency = consistency_check(p, d, c.tol);
  const auto& lattice = p.lattice();

  if (c.format == "json") {
    json atoms = json::array();
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      atoms.push_back({{"antichain", lattice.node(i).to_string()}, {"atom", p.atom(i)}});
    }
    json j{{"measure", c.measure},
           {"n", d.n_sources()},
           {"digest", d.digest()},
           {"atoms", atoms},
           {"consistency", {{"max_abs_residual", consistency.max_abs_residual()}, {"tolerance", c.tol},
                            {"ok", consistency.ok()}}}};
    out << j.dump(2) << "\n";
  } else {
    out << fmt::format("measure {}  n={}  atoms={}  digest {}\n", c.measure, d.n_sources(), lattice.size(),
                       short_digest(d.digest()));
    std::size_t width = 9;
    for (const auto& a : lattice.nodes()) width = std::max(width, a.to_string().size());
    out << fmt::format("{:<{}}  {}\n", "antichain", width, "atom");
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      out << fmt::format("{:<{}}  {}\n", lattice.node(i).to_string(), width, num(p.atom(i)));
    }
    out << fmt::format("consistency: max |residual| {} over {} subsets (tol {}) {}\n",
                       num(consistency.max_abs_residual()), consistency.entries.size(), num(c.tol),
                       consistency.ok() ? "ok" : "VIOLATED");
  }
  return consistency.ok() ? kOk : kUnexpected;
}

// ---- check ----------------------------------------------------------------

struct CheckConfig {
  Source source;
  std::string measure = "imin";
  double tol = kDefaultTolerance;
  std::uint64_t seed = 0;
  int trials = 32;
  std::string property = "all";
  std::string expect;
  std::string format = "text";
};

std::vector<PropertyReport> run_checks(const JointDistribution& d, const RedundancyMeasure& m,
                                       const std::vector<PropertyId>& which, double tol, const ReiOptions& rei) {
  const std::string mid(m.id());
  std::optional<PidResult> atoms;
  auto get_atoms = [&]() -> const PidResult& {
    if (!atoms) atoms = atoms_from_redundancy(d, m);
    return *atoms;
  };
  std::optional<TheoremWitness> witness;
  auto get_witness = [&]() -> const TheoremWitness& {
    if (!witness) witness = theorem_witness(m, tol, rei);
    return *witness;
  };

  std::vector<PropertyReport> out;
  for (const auto id : which) {
    switch (id) {
      case PropertyId::LP: out.push_back(check_lp(get_atoms(), tol)); break;
      case PropertyId::REI: out.push_back(check_rei(d, m, rei)); break;
      case PropertyId::TCR:
        out.push_back(d.target_arity() >= 2 ? check_tcr(d, m, tol)
                                            : vacuous(id, mid, tol, "target has a single component"));
        break;
      case PropertyId::LM: out.push_back(check_lm(d, m, tol)); break;
      case PropertyId::SM: out.push_back(check_sm(d, m, tol)); break;
      case PropertyId::ID:
        out.push_back(d.n_sources() == 2 ? check_id(d, m, tol) : vacuous(id, mid, tol, "needs two sources"));
        break;
      case PropertyId::IID:
        out.push_back(d.n_sources() == 2 ? check_iid(d, m, tol) : vacuous(id, mid, tol, "needs two sources"));
        break;
      case PropertyId::L1: out.push_back(check_rsi_pairwise(get_atoms(), d, tol)); break;
      case PropertyId::L2: out.push_back(check_lp_implies_lm(get_atoms(), tol)); break;
      case PropertyId::C1: {
        const auto& lattice = get_atoms().lattice();
        auto r = check_pairwise_bounds(lattice, redundancy_values(d, m, lattice), tol);
        r.measure_id = mid;
        if (r.witness) r.witness->digest = d.digest();
        out.push_back(std::move(r));
        break;
      }
      case PropertyId::L3:
        out.push_back(d.target_arity() >= 2 ? check_tcr_equivalence(d, m, tol)
                                            : vacuous(id, mid, tol, "target has a single component"));
        break;
      case PropertyId::L4:
        if (d.n_sources() == 2) {
          const auto copy = pair_copy(d);
          out.push_back(check_lemma4_equivalents(atoms_from_redundancy(copy, m), copy, tol));
        } else {
          out.push_back(vacuous(id, mid, tol, "needs two sources"));
        }
        break;
      case PropertyId::T1: out.push_back(get_witness().theorem1); break;
      case PropertyId::T2: out.push_back(get_witness().theorem2); break;
    }
  }
  return out;
}

int cmd_check(const CheckConfig& c, std::ostream& out) {
  check_tolerance(c.tol);
  if (c.trials < 0) throw InputError("--trials must be nonnegative");
  const auto d = load_source(c.source);
  const auto m = MeasureRegistry::builtin().get(c.measure);
  std::vector<PropertyId> which;
  if (c.property == "all") {
    for (int i = 0; i <= static_cast<int>(PropertyId::T2); ++i) which.push_back(static_cast<PropertyId>(i));
  } else {
    which.push_back(parse_property(c.property));
  }
  const auto expectations = c.expect.empty() ? Expectations{} : load_expectations(c.expect);
  const auto reports = run_checks(d, *m, which, c.tol, ReiOptions{c.trials, c.seed, c.tol});

  std::vector<std::string> unexpected;
  for (const auto& r : reports) {
    const auto e = expected(expectations, c.measure, r.property);
    if (e && *e != r.verdict) {
      unexpected.push_back(fmt::format("{} expected {} got {}", to_string(r.property), to_string(*e),
                                       to_string(r.verdict)));
    }
  }

  if (c.format == "json") {
    json reps = json::array();
    for (const auto& r : reports) reps.push_back(report_to_json(r));
    out << json{{"measure", c.measure}, {"digest", d.digest()}, {"reports", reps}, {"unexpected", unexpected}}.dump(2)
        << "\n";
  } else {
    out << fmt::format("measure {}  n={}  digest {}\n", c.measure, d.n_sources(), short_digest(d.digest()));
    for (const auto& r : reports) out << report_line(r) << "\n";
    for (const auto& u : unexpected) out << "unexpected: " << u << "\n";
  }
  return unexpected.empty() ? kOk : kUnexpected;
}

// ---- theorem ----------------------------------------------------------------

int cmd_theorem(const std::string& measure, double tol, std::uint64_t seed, const std::string& format,
                std::ostream& out) {
  check_tolerance(tol);
  const auto m = MeasureRegistry::builtin().get(measure);
  const auto w = theorem_witness(*m, tol, ReiOptions{32, seed, tol});
  const std::vector<const PropertyReport*> reports{&w.rsi_pairwise, &w.pairwise_bounds, &w.lp,      &w.rei,
                                                   &w.tcr,    &w.id,         &w.theorem1, &w.theorem2};
  if (format == "json") {
    json steps = json::array();
    for (const auto& s : w.steps) steps.push_back({{"label", s.label}, {"value", s.value}});
    json reps = json::array();
    for (const auto* r : reports) reps.push_back(report_to_json(*r));
    out << json{{"measure", measure}, {"gate_digest", w.gate_digest}, {"steps", steps}, {"reports", reps},
                {"conclusions", w.conclusions}}
               .dump(2)
        << "\n";
  } else {
    out << fmt::format("XOR-Source-Copy gate, measure {}  digest {}\n", measure, short_digest(w.gate_digest));
    std::size_t width = 0;
    for (const auto& s : w.steps) width = std::max(width, s.label.size());
    for (const auto& s : w.steps) out << fmt::format("  {:<{}}  {}\n", s.label, width, num(s.value));
    for (const auto* r : reports) out << report_line(*r) << "\n";
    for (const auto& c : w.conclusions) out << "conclusion: " << c << "\n";
  }
  return kOk;
}

// ---- lattice ----------------------------------------------------------------

int cmd_lattice(int n, const std::string& format, bool allow_large, std::ostream& out) {
  if (n < 1) throw InputError("--n must be at least 1");
  const auto lattice = lattice_for(n, LatticeLimit{allow_large});
  const auto& covers = lattice->lower_covers();
  if (format == "json") {
    json nodes = json::array();
    for (std::size_t i = 0; i < lattice->size(); ++i) {
      nodes.push_back({{"id", i},
                       {"antichain", lattice->node(i).to_string()},
                       {"parthood", lattice->parthood(i).row_string()},
                       {"degree_of_redundancy", degree_of_redundancy(lattice->node(i))}});
    }
    json edges = json::array();
    for (std::size_t a = 0; a < covers.size(); ++a) {
      for (const auto b : covers[a]) edges.push_back({b, a});
    }
    out << json{{"n", n}, {"nodes", nodes}, {"edges", edges}}.dump(2) << "\n";
  } else if (format == "dot") {
    out << fmt::format("digraph redundancy_lattice_{} {{\n  rankdir=BT;\n  node [shape=plaintext];\n", n);
    for (std::size_t i = 0; i < lattice->size(); ++i) {
      out << fmt::format("  n{} [label=\"{}\"];\n", i, lattice->node(i).to_string());
    }
    for (std::size_t a = 0; a < covers.size(); ++a) {
      for (const auto b : covers[a]) out << fmt::format("  n{} -> n{};\n", b, a);
    }
    out << "}\n";
  } else {
    out << fmt::format("n={}  nodes={}  covers={}\n", n, lattice->size(), lattice->cover_count());
    for (std::size_t i = 0; i < lattice->size(); ++i) {
      std::string below;
      for (const auto b : covers[i]) below += (below.empty() ? "" : " ") + lattice->node(b).to_string();
      out << fmt::format("{:>4}  {:<24}  {}  covers: {}\n", i, lattice->node(i).to_string(),
                         lattice->parthood(i).row_string(), below.empty() ? "-" : below);
    }
  }
  return kOk;
}

// ---- table2 -----------------------------------------------------------------

constexpr std::array<std::string_view, 4> kUnimplemented = {"BROJA", "R_min", "I_red", "I_cup^<"};

std::string mark(Verdict v) {
  switch (v) {
    case Verdict::pass: return "✓";
    case Verdict::fail: return "✗";
    case Verdict::vacuous: return "-";
  }
  return "?";
}

int cmd_table2(double tol, std::uint64_t seed, const std::string& expect, const std::string& format,
               std::ostream& out) {
  check_tolerance(tol);
  const auto corpus = gate_corpus();
  const auto& registry = MeasureRegistry::builtin();
  const auto expectations = expect.empty() ? Expectations{} : load_expectations(expect);
  std::vector<MatrixRow> rows;
  for (const auto& id : registry.ids()) {
    rows.push_back(property_matrix_row(*registry.get(id), corpus, tol, ReiOptions{32, seed, tol}));
  }

  std::vector<std::string> unexpected;
  for (const auto& row : rows) {
    for (const auto& [p, cell] : row.cells) {
      const auto e = expected(expectations, row.measure_id, p);
      if (e && *e != cell.verdict) {
        unexpected.push_back(fmt::format("{} {} expected {} got {}", row.measure_id, to_string(p), to_string(*e),
                                         to_string(cell.verdict)));
      }
    }
  }

  std::string corpus_names;
  for (const auto& g : corpus) corpus_names += (corpus_names.empty() ? "" : ", ") + g.name();

  if (format == "json") {
    json measures = json::array();
    for (const auto& row : rows) {
      json cells = json::object();
      for (const auto& [p, cell] : row.cells) cells[std::string(to_string(p))] = report_to_json(cell);
      measures.push_back({{"measure", row.measure_id}, {"cells", cells}});
    }
    json missing = json::array();
    for (const auto name : kUnimplemented) missing.push_back(name);
    out << json{{"corpus", corpus_names}, {"measures", measures}, {"not_implemented", missing},
                {"unexpected", unexpected}}
               .dump(2)
        << "\n";
  } else {
    out << fmt::format("{:<10} {:<4} {:<4} {:<4} {:<4}\n", "measure", "LP", "TCR", "REI", "ID");
    for (const auto& row : rows) {
      out << fmt::format("{:<10}", display_name(row.measure_id));
      for (const auto p : matrix_properties()) out << " " << mark(row.cells.at(p).verdict) << "   ";
      out << "\n";
    }
    for (const auto name : kUnimplemented) out << fmt::format("{:<10} n/a (not implemented)\n", name);
    out << fmt::format("✓ = no violation found, ✗ = violation witnessed; corpus: {}\n", corpus_names);
    for (const auto& row : rows) {
      for (const auto& [p, cell] : row.cells) {
        if (cell.verdict == Verdict::fail) out << display_name(row.measure_id) << " " << report_line(cell) << "\n";
      }
    }
    for (const auto& u : unexpected) out << "unexpected: " << u << "\n";
  }
  return unexpected.empty() ? kOk : kUnexpected;
}

// ---- gate -------------------------------------------------------------------

int cmd_gate(const std::string& id, const std::string& emit, bool list, std::ostream& out) {
  if (list) {
    for (const auto& g : gate_ids()) out << g << "\n";
    return kOk;
  }
  if (id.empty()) throw InputError("gate id required (or --list)");
  const auto d = make_gate(id);
  if (emit.empty()) {
    out << distribution_to_json(d).dump(2) << "\n";
  } else {
    save_distribution(d, emit);
  }
  return kOk;
}

}  // namespace

json report_to_json(const PropertyReport& r) {
  json j{{"property", to_string(r.property)},
         {"verdict", to_string(r.verdict)},
         {"measure", r.measure_id},
         {"tolerance", r.tolerance},
         {"search_space", r.search_space}};
  if (!r.note.empty()) j["note"] = r.note;
  if (r.witness) {
    json evidence = json::array();
    for (const auto& e : r.witness->evidence) evidence.push_back({{"label", e.label}, {"value", e.value}});
    j["witness"] = {{"digest", r.witness->digest}, {"tuple", r.witness->tuple}, {"evidence", evidence}};
  }
  return j;
}

std::string report_line(const PropertyReport& r) {
  std::string line = fmt::format("{:<4} {:<7}", to_string(r.property), to_string(r.verdict));
  if (r.witness) {
    line += " witness " + r.witness->tuple;
    for (const auto& e : r.witness->evidence) line += fmt::format("  {}={}", e.label, num(e.value));
    if (!r.witness->digest.empty()) line += "  [" + short_digest(r.witness->digest) + "]";
  } else if (!r.search_space.empty()) {
    line += " over " + r.search_space;
  }
  if (!r.note.empty()) line += " (" + r.note + ")";
  return line;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partial information decomposition toolkit", "pidkit"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"text", "json"});

  AtomsConfig atoms;
  auto* atoms_cmd = app.add_subcommand("atoms", "Compute all information atoms of a distribution");
  add_source_options(atoms_cmd, atoms.source);
  atoms_cmd->add_option("--measure", atoms.measure, "Redundancy measure id")->capture_default_str();
  atoms_cmd->add_option("--tol", atoms.tol, "Tolerance for the consistency check")->capture_default_str();
  atoms_cmd->add_option("--format", atoms.format)->check(formats)->capture_default_str();
  atoms_cmd->add_flag("--allow-large", atoms.allow_large, "Allow n = 5 (7579 atoms)");

  CheckConfig check;
  auto* check_cmd = app.add_subcommand("check", "Run property checks on a distribution");
  add_source_options(check_cmd, check.source);
  check_cmd->add_option("--measure", check.measure)->capture_default_str();
  check_cmd->add_option("--tol", check.tol)->capture_default_str();
  check_cmd->add_option("--seed", check.seed, "Seed for random re-encodings")->capture_default_str();
  check_cmd->add_option("--trials", check.trials, "Random re-encodings per REI check")->capture_default_str();
  check_cmd->add_option("--property", check.property, "Property id or 'all'")->capture_default_str();
  check_cmd->add_option("--expect", check.expect, "Expectations JSON; unexpected verdicts exit 1");
  check_cmd->add_option("--format", check.format)->check(formats)->capture_default_str();

  std::string theorem_measure = "imin";
  double theorem_tol = kDefaultTolerance;
  std::uint64_t theorem_seed = 0;
  std::string theorem_format = "text";
  auto* theorem_cmd = app.add_subcommand("theorem", "Replay both inconsistency proofs on XOR-Source-Copy");
  theorem_cmd->add_option("--measure", theorem_measure)->capture_default_str();
  theorem_cmd->add_option("--tol", theorem_tol)->capture_default_str();
  theorem_cmd->add_option("--seed", theorem_seed)->capture_default_str();
  theorem_cmd->add_option("--format", theorem_format)->check(formats)->capture_default_str();

  int lattice_n = 2;
  std::string lattice_format = "text";
  bool lattice_large = false;
  auto* lattice_cmd = app.add_subcommand("lattice", "Print the redundancy lattice");
  lattice_cmd->add_option("--n", lattice_n, "Number of sources")->capture_default_str();
  lattice_cmd->add_option("--format", lattice_format)->check(CLI::IsMember({"text", "json", "dot"}))
      ->capture_default_str();
  lattice_cmd->add_flag("--allow-large", lattice_large, "Allow n = 5");

  double table_tol = kDefaultTolerance;
  std::uint64_t table_seed = 0;
  std::string table_expect;
  std::string table_format = "text";
  auto* table_cmd = app.add_subcommand("table2", "LP/TCR/REI/ID matrix of the implemented measures");
  table_cmd->add_option("--tol", table_tol)->capture_default_str();
  table_cmd->add_option("--seed", table_seed)->capture_default_str();
  table_cmd->add_option("--expect", table_expect, "Expectations JSON; drift exits 1");
  table_cmd->add_option("--format", table_format)->check(formats)->capture_default_str();

  std::string gate_id;
  std::string gate_emit;
  bool gate_list = false;
  auto* gate_cmd = app.add_subcommand("gate", "Emit a built-in gate as distribution JSON");
  gate_cmd->add_option("id", gate_id, "Gate id");
  gate_cmd->add_option("--emit", gate_emit, "Write to this file instead of stdout");
  gate_cmd->add_flag("--list", gate_list, "List gate ids");

  std::vector<std::string> argv_storage{"pidkit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*atoms_cmd) return cmd_atoms(atoms, out);
    if (*check_cmd) return cmd_check(check, out);
    if (*theorem_cmd) return cmd_theorem(theorem_measure, theorem_tol, theorem_seed, theorem_format, out);
    if (*lattice_cmd) return cmd_lattice(lattice_n, lattice_format, lattice_large, out);
    if (*table_cmd) return cmd_table2(table_tol, table_seed, table_expect, table_format, out);
    if (*gate_cmd) return cmd_gate(gate_id, gate_emit, gate_list, out);
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace pidkit::cli
