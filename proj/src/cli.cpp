#include "teamcount/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "teamcount/builtins.hpp"
#include "teamcount/counting.hpp"
#include "teamcount/encodings.hpp"
#include "teamcount/error.hpp"
#include "teamcount/eval.hpp"
#include "teamcount/normal_form.hpp"
#include "teamcount/parser.hpp"
#include "teamcount/reductions.hpp"
#include "teamcount/paired.hpp"

namespace teamcount {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

class Report {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, const mpz_class& value) { add(key, value.get_str()); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void verdict(const std::string& key, bool ok) {
    add(key, std::string(ok ? "OK" : "MISMATCH"));
    if (!ok) mismatch_ = true;
  }
  bool mismatch() const { return mismatch_; }

  template <class F>
  auto timed(const std::string& phase, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      stamp(phase, start);
    } else {
      auto result = body();
      stamp(phase, start);
      return result;
    }
  }

  void print(std::ostream& out) const {
    for (const auto& [k, v] : lines_) out << k << " = " << v << '\n';
    for (const auto& [k, v] : times_) out << "time." << k << "_ms = " << v << '\n';
  }

 private:
  void stamp(const std::string& phase, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << d.count();
    times_.emplace_back(phase, s.str());
  }

  std::vector<std::pair<std::string, std::string>> lines_;
  std::vector<std::pair<std::string, std::string>> times_;
  bool mismatch_ = false;
};

struct Inputs {
  std::string structure, formula, team, vars, mode = "projected", graph, companion, output, emit;
  std::string as, free_relations, exists_relations, individuals, kind, name;
  bool verify = false, all_relations = false;
  int jobs = 0;
  std::uint64_t budget = std::uint64_t{1} << 24;
};

struct LoadedFormula {
  FormulaPtr formula;
  const BuiltinFormula* builtin = nullptr;
};

const AtomRegistry& registry() {
  static const AtomRegistry r = standard_registry();
  return r;
}

CountOptions count_options(const Inputs& in) { return {in.budget, in.jobs, &registry(), true}; }
EvalOptions eval_options(const Inputs& in) { return {&registry(), in.budget}; }

VarTuple split_list(const std::string& text) {
  VarTuple out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::size_t>> parse_signature(const std::string& text) {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& item : split_list(text)) {
    const auto slash = item.find('/');
    if (slash == std::string::npos) throw UsageError("relation '" + item + "' needs NAME/ARITY");
    try {
      out.emplace_back(item.substr(0, slash), std::stoul(item.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw UsageError("bad arity in '" + item + "'");
    }
  }
  return out;
}

class Session {
 public:
  Session(const Inputs& in, Report& report) : in_(in), report_(report) {}

  const Structure& structure() {
    if (!structure_) {
      if (in_.structure.empty()) throw UsageError("--structure is required");
      const auto text = read_file(in_.structure);
      report_.add("input.structure", hex(fnv1a(text)));
      structure_ = report_.timed("parse_structure", [&] { return parse_structure(text); });
    }
    return *structure_;
  }

  const LoadedFormula& formula() {
    if (!formula_) {
      if (in_.formula.empty()) throw UsageError("--formula is required");
      LoadedFormula lf;
      std::string text;
      if (in_.formula.rfind("builtin:", 0) == 0) {
        lf.builtin = &builtin_formula(in_.formula.substr(8));
        text = lf.builtin->source;
        lf.formula = lf.builtin->formula;
      } else {
        text = std::filesystem::is_regular_file(in_.formula) ? read_file(in_.formula) : in_.formula;
        lf.formula = report_.timed("parse_formula", [&] { return parse_team_formula(text); });
      }
      report_.add("input.formula", hex(fnv1a(text)));
      formula_ = lf;
    }
    return *formula_;
  }

  QBFormula cnf(const std::string& path, const std::string& key) {
    if (path.empty()) throw UsageError("a DIMACS file is required");
    const auto text = read_file(path);
    report_.add("input." + key, hex(fnv1a(text)));
    return report_.timed("parse_" + key, [&] { return parse_cnf(text); });
  }

  VarTuple team_vars() {
    if (!in_.vars.empty()) return split_list(in_.vars);
    const auto& lf = formula();
    if (lf.builtin && !lf.builtin->relational()) return lf.builtin->team_vars;
    return free_variables_ordered(*lf.formula);
  }

  Team team() {
    const std::string spec = in_.team.empty() ? "full" : in_.team;
    if (spec == "empty") return Team(team_vars());
    if (spec == "full") return Team::full(structure().size(), team_vars());
    const auto text = read_file(spec);
    report_.add("input.team", hex(fnv1a(text)));
    return parse_team(text, structure().size());
  }

 private:
  const Inputs& in_;
  Report& report_;
  std::optional<Structure> structure_;
  std::optional<LoadedFormula> formula_;
};

std::string team_rows(const Team& t) {
  std::string out;
  for (const auto& row : t.rows()) {
    if (!out.empty()) out += ';';
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + std::to_string(row[i]);
  }
  return out.empty() ? "-" : out;
}

void run_eval(const Inputs& in, Report& r) {
  Session s(in, r);
  const auto& f = s.formula().formula;
  const Team team = s.team();
  r.add("team.size", static_cast<std::uint64_t>(team.size()));
  const bool sat = r.timed("eval", [&] { return eval(s.structure(), team, f, eval_options(in)); });
  r.add("result.satisfied", sat);
  if (in.verify) {
    const bool ref = r.timed("verify", [&] {
      return eval_reference(s.structure(), team, f, eval_options(in));
    });
    r.verdict("verify", ref == sat);
  }
}

// Definitional enumeration, or plain serial enumeration once the
// definitional evaluator exceeds the budget.
CountResult reference_team_count(const Structure& a, const FormulaPtr& f, const VarTuple& vars,
                                 CountOptions opts, Report& r) {
  try {
    CountOptions definitional = opts;
    definitional.budget = std::min<std::uint64_t>(opts.budget, std::uint64_t{1} << 20);
    auto ref = count_teams_reference(a, f, vars, definitional);
    r.add("verify.oracle", std::string("definitional"));
    return ref;
  } catch (const BudgetExceeded&) {
    opts.closure_pruning = false;
    r.add("verify.oracle", std::string("serial-enumeration"));
    return count_teams_serial(a, f, vars, opts);
  }
}

void run_count_teams(const Inputs& in, Report& r) {
  Session s(in, r);
  const auto& lf = s.formula();
  if (lf.builtin && lf.builtin->relational())
    throw UsageError(lf.builtin->name + " is relational; use count-relations");
  const auto vars = s.team_vars();
  r.add("vars", std::string(vars.empty() ? "-" : [&] {
    std::string j;
    for (const auto& v : vars) j += (j.empty() ? "" : ",") + v;
    return j;
  }()));
  const auto result = r.timed("count", [&] {
    return count_teams(s.structure(), lf.formula, vars, count_options(in));
  });
  r.add("result.count", result.count);
  r.add("stats.nodes", result.stats.nodes);
  if (in.verify) {
    const auto ref = r.timed("verify", [&] {
      return reference_team_count(s.structure(), lf.formula, vars, count_options(in), r);
    });
    r.add("verify.count", ref.count);
    r.verdict("verify", ref.count == result.count);
  }
}

void run_count_relations(const Inputs& in, Report& r) {
  Session s(in, r);
  const auto& lf = s.formula();
  RelationQuery q;
  if (lf.builtin) {
    if (!lf.builtin->relational()) throw UsageError(lf.builtin->name + " is a team formula");
    q = lf.builtin->query();
    if (lf.builtin->name.rfind("sigma11-cnfneg", 0) == 0 &&
        !validate_sigma1cnf_neg_structure(s.structure()))
      throw PreconditionError("structure is not a valid Σ₁CNF⁻ encoding");
  } else {
    q.free_relations = parse_signature(in.free_relations);
    q.exists_relations = parse_signature(in.exists_relations);
    q.free_individuals = split_list(in.individuals);
    q.body = lf.formula;
  }
  const bool nonempty = !in.all_relations;
  r.add("nonempty_only", nonempty);
  const auto result = r.timed("count", [&] {
    return count_relations(s.structure(), q, nonempty, count_options(in));
  });
  r.add("result.count", result.count);
  if (in.verify) {
    const auto ref = r.timed("verify", [&] {
      return count_relations_serial(s.structure(), q, nonempty, count_options(in));
    });
    r.add("verify.count", ref.count);
    r.verdict("verify", ref.count == result.count);
  }
}

void run_count_sat(const Inputs& in, Report& r) {
  Session s(in, r);
  const QBFormula f = s.cnf(in.formula, "formula");
  const CountMode mode = parse_count_mode(in.mode);
  r.add("mode", std::string(to_string(mode)));
  const auto result = r.timed("count", [&] { return count_assignments(f, mode, count_options(in)); });
  r.add("result.count", result.count);
  if (in.verify) {
    const auto ref = r.timed("verify", [&] {
      return count_assignments_serial(f, mode, count_options(in));
    });
    r.add("verify.count", ref.count);
    r.verdict("verify", ref.count == result.count);
  }
}

void run_max_subteam(const Inputs& in, Report& r) {
  Session s(in, r);
  const auto& f = s.formula().formula;
  const Team team = s.team();
  const Team m = r.timed("max_subteam", [&] { return max_subteam(s.structure(), team, f); });
  r.add("result.size", static_cast<std::uint64_t>(m.size()));
  r.add("result.team", team_rows(m));
  if (in.verify) {
    const Team ref = r.timed("verify", [&] {
      return max_subteam_reference(s.structure(), team, f, eval_options(in));
    });
    r.verdict("verify", ref == m);
  }
}

void emit_cnf(const Inputs& in, Report& r, const QBFormula& f, std::string& trailer) {
  const auto text = to_dimacs(f);
  r.add("output.digest", hex(fnv1a(text)));
  if (in.output.empty()) trailer = text;
  else write_file(in.output, text);
}

void run_reduce(const Inputs& in, Report& r, std::string& trailer) {
  Session s(in, r);
  r.add("reduction", in.kind);
  if (in.kind == "star-turing") {
    const QBFormula f = s.cnf(in.formula, "formula");
    const auto res = r.timed("reduce", [&] {
      return star_turing_reduction(f, brute_force_star_oracle(count_options(in)));
    });
    r.add("result.probe_answer", res.probe_answer);
    r.add("result.count", res.result.count);
    r.add("stats.oracle_calls", res.result.stats.oracle_calls);
    if (in.verify) {
      const auto ref = count_assignments(f, CountMode::Projected, count_options(in));
      r.add("verify.count", ref.count);
      r.verdict("verify", ref.count == res.result.count);
    }
    return;
  }
  const bool dependence = in.kind == "dep2cnf";
  if (!dependence && in.kind != "incl2dualhorn")
    throw UsageError("unknown reduction '" + in.kind + "' (dep2cnf|incl2dualhorn|star-turing)");
  const auto& f = s.formula().formula;
  const VarTuple order = split_list(in.vars);
  const auto d = check_normal_form(f, dependence ? AtomKind::Dependence : AtomKind::Inclusion,
                                   order.empty() ? nullptr : &order);
  const Structure& a = s.structure();
  const QBFormula gamma = r.timed("reduce", [&] {
    return dependence ? dep_to_sigma1cnf_neg(a, d) : incl_to_sigma1_dualhorn(a, d);
  });
  const auto flags = classify(gamma);
  r.add("result.variables", static_cast<std::uint64_t>(gamma.num_vars()));
  r.add("result.free", static_cast<std::uint64_t>(gamma.free_vars().size()));
  r.add("result.clauses", static_cast<std::uint64_t>(gamma.clauses().size()));
  r.add("flags.cnf_minus", flags.cnf_minus);
  r.add("flags.dual_horn", flags.dual_horn);
  if (in.verify) {
    const auto star = r.timed("verify", [&] {
      return count_assignments(gamma, CountMode::Star, count_options(in)).count;
    });
    const auto teams = count_teams(a, f, d.free_vars, count_options(in)).count;
    r.add("verify.star_count", star);
    r.add("verify.team_count", teams);
    r.verdict("verify", star == teams);
  }
  emit_cnf(in, r, gamma, trailer);
}

QBFormula load_companion(Session& s, const Inputs& in, const std::vector<std::string>& edges) {
  if (in.companion.empty()) return QBFormula();
  return name_companion(s.cnf(in.companion, "companion"), edges);
}

void run_chain(const Inputs& in, Report& r) {
  Session s(in, r);
  if (in.formula.empty() && in.graph.empty()) throw UsageError("chain needs --formula or --graph");
  const auto opts = count_options(in);
  auto emit = [&](const std::string& file, const std::string& text) {
    if (!in.emit.empty()) write_file((std::filesystem::path(in.emit) / file).string(), text);
  };
  if (!in.formula.empty()) {
    const QBFormula f = s.cnf(in.formula, "formula");
    const auto split = split_sigma1_3cnf(f);
    const auto original = count_assignments(f, CountMode::Projected, opts).count;
    const auto paired = count_paired(split.paired(), opts).count;
    const auto prenex =
        count_assignments(prenex_conjoin(split.carrier, split.companion), CountMode::Projected, opts)
            .count;
    r.add("split.projected", original);
    r.add("split.paired", paired);
    r.add("split.prenex", prenex);
    r.add("split.mixed_clauses", static_cast<std::uint64_t>(split.mixed_vars.size()));
    r.verdict("verify.split", original == paired && paired == prenex);
    emit("split-carrier.cnf", to_dimacs(split.carrier));
    emit("split-companion.cnf", to_dimacs(split.companion));
  }
  if (in.graph.empty()) return;
  const auto text = read_file(in.graph);
  r.add("input.graph", hex(fnv1a(text)));
  const GraphFile g = parse_graph(text);
  PairedInstance pm;
  if (!g.bipartite) {
    PairedInstance cc;
    cc.kind = PairedKind::CycleCover;
    cc.digraph = g.digraph;
    std::vector<std::string> names;
    for (const auto& e : g.digraph.edges()) names.push_back(e.name);
    cc.companion = load_companion(s, in, names);
    const auto covers = r.timed("cycle_cover", [&] { return count_paired(cc, opts).count; });
    r.add("cycle_cover.count", covers);
    pm = cc_to_pm(cc);
    emit("perfect-matching.graph", format_graph(pm.bigraph));
    const auto matchings = count_paired(pm, opts).count;
    r.add("perfect_matching.count", matchings);
    r.verdict("verify.cc_to_pm", covers == matchings);
  } else {
    pm.kind = PairedKind::PerfectMatching;
    pm.bigraph = g.bigraph;
    std::vector<std::string> names;
    for (const auto& e : g.bigraph.edges()) names.push_back(e.name);
    pm.companion = load_companion(s, in, names);
    r.add("perfect_matching.count", count_paired(pm, opts).count);
  }
  const auto interp = r.timed("interpolate", [&] {
    return pm_to_im_interpolate(pm, brute_force_paired_oracle(opts));
  });
  for (std::size_t k = 0; k < interp.oracle_answers.size(); ++k)
    r.add("interpolate.matchings_k" + std::to_string(k + 1), interp.oracle_answers[k]);
  r.add("interpolate.count", interp.result.count);
  r.verdict("verify.interpolation", interp.zero_residual &&
                                        interp.result.count == count_paired(pm, opts).count);

  PairedInstance im;
  im.kind = PairedKind::Matching;
  im.bigraph = build_Gk(pm.bigraph, 1);
  im.companion = pm.companion;
  emit("g1.graph", format_graph(im.bigraph));
  const auto two = im_to_2cnf_neg(im);
  emit("g1-2cnf.cnf", to_dimacs(two.combined));
  const auto im_count = count_paired(im, opts).count;
  const auto cnf_count = r.timed("matching_to_2cnf", [&] {
    return count_assignments(two.combined, CountMode::Projected, opts).count;
  });
  r.add("g1.matchings", im_count);
  r.add("g1.sigma1cnf_neg", cnf_count);
  r.add("g1.cnf_minus", classify(two.combined).cnf_minus);
  r.verdict("verify.im_to_2cnf", im_count == cnf_count);
}

void run_verify(const Inputs& in, Report& r) {
  Session s(in, r);
  const auto& lf = s.formula();
  if (lf.builtin && lf.builtin->relational()) {
    Inputs copy = in;
    copy.verify = true;
    return run_count_relations(copy, r);
  }
  const auto vars = s.team_vars();
  const auto& f = lf.formula;
  const Structure& a = s.structure();
  const auto opts = count_options(in);
  const auto fast = count_teams(a, f, vars, opts).count;
  const auto ref =
      r.timed("reference", [&] { return reference_team_count(a, f, vars, opts, r).count; });
  r.add("count.teams", fast);
  r.add("count.reference", ref);
  r.verdict("verify.count", fast == ref);
  const auto usage = atom_usage(*f);
  if (usage.inclusion_logic()) {
    const bool exists = inclusion_team_exists(a, f, vars);
    r.verdict("verify.max_subteam_nonempty", exists == (fast > 0));
    const auto reach = count_inclusion_teams(a, f, vars, opts).count;
    r.add("count.inclusion_search", reach);
    r.verdict("verify.inclusion_search", reach == fast);
  }
  for (auto kind : {AtomKind::Dependence, AtomKind::Inclusion}) {
    if (kind == AtomKind::Dependence ? !usage.dependence_logic() : !usage.inclusion_logic()) continue;
    NormalFormDescriptor d;
    try {
      d = check_normal_form(f, kind, &vars);
    } catch (const NotInNormalForm&) {
      continue;
    }
    const auto gamma =
        kind == AtomKind::Dependence ? dep_to_sigma1cnf_neg(a, d) : incl_to_sigma1_dualhorn(a, d);
    const auto star = count_assignments(gamma, CountMode::Star, opts).count;
    const std::string key = kind == AtomKind::Dependence ? "dep2cnf" : "incl2dualhorn";
    r.add("count." + key, star);
    r.verdict("verify." + key, star == fast);
  }
}

void run_builtin(const Inputs& in, Report& r) {
  if (in.name.empty()) {
    for (const auto& n : builtin_names()) r.add("builtin", n);
    return;
  }
  const auto& b = builtin_formula(in.name);
  auto sig = [](const std::vector<std::pair<std::string, std::size_t>>& rels) {
    std::string out;
    for (const auto& [n, a] : rels) out += (out.empty() ? "" : ",") + n + "/" + std::to_string(a);
    return out.empty() ? std::string("-") : out;
  };
  std::vector<std::pair<std::string, std::size_t>> vocab(b.vocabulary.begin(), b.vocabulary.end());
  std::string vars;
  for (const auto& v : b.team_vars) vars += (vars.empty() ? "" : ",") + v;
  r.add("name", b.name);
  r.add("description", b.description);
  r.add("formula", to_string(*b.formula));
  r.add("team_vars", vars.empty() ? std::string("-") : vars);
  r.add("vocabulary", sig(vocab));
  r.add("free_relations", sig(b.free_relations));
  r.add("exists_relations", sig(b.exists_relations));
}

void run_encode(const Inputs& in, Report& r, std::string& trailer) {
  Session s(in, r);
  const QBFormula f = s.cnf(in.formula, "formula");
  Structure out(1);
  if (in.as == "2cnf+") out = encode_2cnf_plus(f);
  else if (in.as == "sigma1cnf-") out = encode_sigma1cnf_neg(f);
  else if (in.as == "dualhorn") out = encode_dualhorn(f);
  else throw UsageError("--as must be 2cnf+, sigma1cnf- or dualhorn");
  const auto text = format_structure(out);
  r.add("output.digest", hex(fnv1a(text)));
  r.add("result.domain", static_cast<std::uint64_t>(out.size()));
  if (in.output.empty()) trailer = text;
  else write_file(in.output, text);
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counting for team-based logics", "teamcount"};
  app.require_subcommand(1);
  Inputs in;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--structure", in.structure, "structure file");
    sub->add_option("--formula", in.formula, "formula file, builtin:NAME or inline text");
    sub->add_option("--jobs", in.jobs, "worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--budget", in.budget, "enumeration budget");
    sub->add_flag("--verify", in.verify, "cross-check with a brute-force oracle");
  };
  auto team_opts = [&](CLI::App* sub) {
    sub->add_option("--team", in.team, "team file, empty or full");
    sub->add_option("--vars", in.vars, "team variables, comma separated");
  };

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a team");
  common(eval_cmd);
  team_opts(eval_cmd);
  auto* teams_cmd = app.add_subcommand("count-teams", "count nonempty satisfying teams");
  common(teams_cmd);
  team_opts(teams_cmd);
  auto* rel_cmd = app.add_subcommand("count-relations", "count relations satisfying an FO formula");
  common(rel_cmd);
  rel_cmd->add_option("--free-relations", in.free_relations, "NAME/ARITY list");
  rel_cmd->add_option("--exists-relations", in.exists_relations, "NAME/ARITY list");
  rel_cmd->add_option("--individuals", in.individuals, "free individual variables");
  rel_cmd->add_flag("--all-relations", in.all_relations, "include all-empty relation tuples");
  auto* sat_cmd = app.add_subcommand("count-sat", "count assignments of a DIMACS formula");
  common(sat_cmd);
  sat_cmd->add_option("--mode", in.mode, "all|star|projected");
  auto* max_cmd = app.add_subcommand("max-subteam", "maximal satisfying subteam (FO(inc))");
  common(max_cmd);
  team_opts(max_cmd);
  auto* reduce_cmd = app.add_subcommand("reduce", "dep2cnf | incl2dualhorn | star-turing");
  common(reduce_cmd);
  reduce_cmd->add_option("kind", in.kind, "reduction")->required();
  reduce_cmd->add_option("--vars", in.vars, "order of the free variables");
  reduce_cmd->add_option("--output", in.output, "write DIMACS here instead of stdout");
  auto* chain_cmd = app.add_subcommand("chain", "paired reduction chain on a graph or formula");
  common(chain_cmd);
  chain_cmd->add_option("--graph", in.graph, "digraph or bigraph file");
  chain_cmd->add_option("--companion", in.companion, "companion DIMACS over edge variables");
  chain_cmd->add_option("--emit", in.emit, "directory for per-step instances");
  auto* verify_cmd = app.add_subcommand("verify", "run every applicable cross-check");
  common(verify_cmd);
  team_opts(verify_cmd);
  auto* builtin_cmd = app.add_subcommand("builtin", "list or show library formulas");
  builtin_cmd->add_option("name", in.name, "formula name");
  auto* encode_cmd = app.add_subcommand("encode", "encode a DIMACS formula as a structure");
  common(encode_cmd);
  encode_cmd->add_option("--as", in.as, "2cnf+|sigma1cnf-|dualhorn")->required();
  encode_cmd->add_option("--output", in.output, "write the structure here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Report report;
  std::string trailer;
  const std::string command = app.get_subcommands().front()->get_name();
  std::string echo = command;
  for (int i = 2; i < argc; ++i) echo += std::string(" ") + argv[i];
  report.add("command", echo);
  try {
    if (command == "eval") run_eval(in, report);
    else if (command == "count-teams") run_count_teams(in, report);
    else if (command == "count-relations") run_count_relations(in, report);
    else if (command == "count-sat") run_count_sat(in, report);
    else if (command == "max-subteam") run_max_subteam(in, report);
    else if (command == "reduce") run_reduce(in, report, trailer);
    else if (command == "chain") run_chain(in, report);
    else if (command == "verify") run_verify(in, report);
    else if (command == "builtin") run_builtin(in, report);
    else if (command == "encode") run_encode(in, report, trailer);
  } catch (const UsageError& e) {
    err << "teamcount: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "teamcount: " << e.what() << '\n';
    return 3;
  }
  report.print(out);
  if (!trailer.empty()) out << '\n' << trailer;
  return report.mismatch() ? 1 : 0;
}

}  // namespace teamcount
