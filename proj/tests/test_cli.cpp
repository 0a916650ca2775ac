#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "teamcount/cli.hpp"
#include "teamcount/qbf.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  std::map<std::string, std::string> keys;

  const std::string& operator[](const std::string& key) const {
    static const std::string missing = "<missing>";
    auto it = keys.find(key);
    return it == keys.end() ? missing : it->second;
  }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "teamcount");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = teamcount::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) break;
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) r.keys.emplace(line.substr(0, eq), line.substr(eq + 3));
  }
  return r;
}

class Workspace {
 public:
  Workspace() {
    dir_ = fs::temp_directory_path() / ("teamcount-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) const {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string without_timing(const std::string& report) {
  std::istringstream in(report);
  std::string out;
  for (std::string line; std::getline(in, line);)
    if (line.rfind("time.", 0) != 0) out += line + '\n';
  return out;
}

}  // namespace

TEST_CASE("count-teams on the 2CNF+ encoding") {
  Workspace ws;
  const auto cnf = ws.file("f.cnf", "p cnf 2 1\n1 2 0\n");
  const auto enc = run({"encode", "--formula", cnf, "--as", "2cnf+", "--output", ws.path("s.txt")});
  REQUIRE(enc.code == 0);
  CHECK(enc["result.domain"] == "2");

  const auto r = run({"count-teams", "--structure", ws.path("s.txt"), "--formula", "builtin:incl-2cnf+",
                      "--vars", "t", "--verify"});
  CHECK(r.code == 0);
  CHECK(r["result.count"] == "3");
  CHECK(r["verify"] == "OK");
  CHECK(r["command"].rfind("count-teams --structure", 0) == 0);
  CHECK(r["input.structure"].size() == 16);
}

TEST_CASE("reduce dep2cnf emits DIMACS with a verdict") {
  Workspace ws;
  const auto s = ws.file("s.txt", "domain 2\n");
  const auto f = ws.file("f.tl", "A u. E w. (dep(u;w) & w != x)\n");
  const auto r = run({"reduce", "dep2cnf", "--structure", s, "--formula", f, "--verify"});
  CHECK(r.code == 0);
  CHECK(r["verify"] == "OK");
  CHECK(r["result.variables"] == "14");
  CHECK(r["flags.cnf_minus"] == "true");
  const auto dimacs = r.out.substr(r.out.find("\n\n") + 2);
  const auto gamma = teamcount::parse_cnf(dimacs);
  CHECK(gamma.num_vars() == 14);
  CHECK(gamma.free_vars().size() == 2);

  const auto out = run({"reduce", "incl2dualhorn", "--structure", s, "--formula", "A u. E w. (inc(x;w) & w != u)",
                        "--verify", "--output", ws.path("g.cnf")});
  CHECK(out.code == 0);
  CHECK(out["verify"] == "OK");
  CHECK(out["flags.dual_horn"] == "true");
  CHECK(fs::exists(ws.path("g.cnf")));
  CHECK(out.out.find("p cnf") == std::string::npos);

  CHECK(run({"reduce", "nosuch", "--structure", s, "--formula", f}).code == 2);
  CHECK(run({"reduce", "dep2cnf", "--structure", s, "--formula", "E w. A u. dep(u;w)"}).code == 3);
}

TEST_CASE("eval on the empty team") {
  Workspace ws;
  const auto s = ws.file("s.txt", "domain 3\nrel R/1\n0\n");
  const auto r = run({"eval", "--structure", s, "--formula", "dep(;x) & R(x) & x != x", "--team", "empty",
                      "--verify"});
  CHECK(r.code == 0);
  CHECK(r["result.satisfied"] == "true");
  CHECK(r["team.size"] == "0");
  CHECK(r["verify"] == "OK");

  const auto team = ws.file("t.txt", "x\n0\n1\n");
  const auto f = run({"eval", "--structure", s, "--formula", "R(x)", "--team", team});
  CHECK(f["result.satisfied"] == "false");
  CHECK(f["input.team"].size() == 16);
}

TEST_CASE("count-sat, count-relations and max-subteam") {
  Workspace ws;
  const auto cnf = ws.file("f.cnf", "p cnf 2 2\ne 2 0\n-1 2 0\n1 -2 0\n");
  CHECK(run({"count-sat", "--formula", cnf, "--mode", "all"})["result.count"] == "2");
  const auto projected = run({"count-sat", "--formula", cnf, "--verify"});
  CHECK(projected["mode"] == "projected");
  CHECK(projected["result.count"] == "2");
  CHECK(projected["verify"] == "OK");
  CHECK(run({"count-sat", "--formula", cnf, "--mode", "star"})["result.count"] == "1");
  CHECK(run({"count-sat", "--formula", cnf, "--mode", "most"}).code == 3);

  const auto s = ws.file("s.txt", "domain 2\n");
  const auto rel = run({"count-relations", "--structure", s, "--formula", "E x. R(x)", "--free-relations", "R/1",
                        "--verify"});
  CHECK(rel["result.count"] == "3");
  CHECK(rel["verify"] == "OK");
  CHECK(run({"count-relations", "--structure", s, "--formula", "A x. R(x)", "--free-relations", "R/1",
             "--all-relations"})["result.count"] == "1");
  CHECK(run({"count-relations", "--structure", s, "--formula", "R(x)", "--free-relations", "R"}).code == 2);

  const auto three = ws.file("n3.txt", "domain 3\n");
  const auto team = ws.file("t.txt", "x y\n0 1\n1 2\n2 2\n");
  const auto m = run({"max-subteam", "--structure", three, "--formula", "inc(x;y)", "--team", team, "--verify"});
  CHECK(m["result.team"] == "2,2");
  CHECK(m["result.size"] == "1");
  CHECK(m["verify"] == "OK");
}

TEST_CASE("relational built-ins and encodings") {
  Workspace ws;
  const auto dh = ws.file("dh.cnf", "p cnf 2 2\n1 2 0\n-1 2 0\n");
  REQUIRE(run({"encode", "--formula", dh, "--as", "dualhorn", "--output", ws.path("dh.txt")}).code == 0);
  const auto r = run({"count-relations", "--structure", ws.path("dh.txt"), "--formula", "builtin:myopic-dualhorn",
                      "--verify"});
  CHECK(r["result.count"] == "2");
  CHECK(r["verify"] == "OK");

  const auto neg = ws.file("neg.cnf", "p cnf 2 1\ne 2 0\n-1 2 0\n");
  REQUIRE(run({"encode", "--formula", neg, "--as", "sigma1cnf-", "--output", ws.path("neg.txt")}).code == 0);
  const auto t = run({"count-relations", "--structure", ws.path("neg.txt"), "--formula", "builtin:sigma11-cnfneg"});
  CHECK(t["result.count"] == "1");
  CHECK(run({"count-relations", "--structure", ws.path("dh.txt"), "--formula", "builtin:sigma11-cnfneg"}).code != 0);
  CHECK(run({"count-teams", "--structure", ws.path("dh.txt"), "--formula", "builtin:myopic-dualhorn"}).code == 2);
  CHECK(run({"encode", "--formula", dh, "--as", "2cnf+"}).code == 3);
  CHECK(run({"encode", "--formula", dh, "--as", "pretty"}).code == 2);
}

TEST_CASE("star-turing and verify subcommands") {
  Workspace ws;
  const auto cnf = ws.file("f.cnf", "p cnf 3 2\ne 3 0\n-1 3 0\n-2 -3 0\n");
  const auto r = run({"reduce", "star-turing", "--formula", cnf, "--verify"});
  CHECK(r["result.probe_answer"] == "2");
  CHECK(r["result.count"] == "3");
  CHECK(r["verify"] == "OK");

  const auto plus = ws.file("p.cnf", "p cnf 3 2\n1 2 0\n2 3 0\n");
  REQUIRE(run({"encode", "--formula", plus, "--as", "2cnf+", "--output", ws.path("p.txt")}).code == 0);
  const auto v = run({"verify", "--structure", ws.path("p.txt"), "--formula", "builtin:incl-2cnf+"});
  CHECK(v.code == 0);
  CHECK(v["count.teams"] == "5");
  CHECK(v["verify.count"] == "OK");
  CHECK(v["verify.inclusion_search"] == "OK");

  const auto s = ws.file("s.txt", "domain 2\nrel R/1\n1\n");
  const auto nf = run({"verify", "--structure", s, "--formula", "A u. E w. (dep(u;w) & (R(w) | x = u))"});
  CHECK(nf.code == 0);
  CHECK(nf["verify.dep2cnf"] == "OK");
}

TEST_CASE("chain on graphs and formulas") {
  Workspace ws;
  const auto g = ws.file("g.txt", "digraph\nvertices 1 2\nf 1 2\nb 2 1\nl 1 1\n");
  const auto companion = ws.file("c.cnf", "p cnf 3 1\n-3 0\n");
  fs::create_directories(ws.path("emit"));
  const auto r = run({"chain", "--graph", g, "--companion", companion, "--emit", ws.path("emit")});
  CHECK(r.code == 0);
  CHECK(r["cycle_cover.count"] == "1");
  CHECK(r["verify.cc_to_pm"] == "OK");
  CHECK(r["verify.interpolation"] == "OK");
  CHECK(r["verify.im_to_2cnf"] == "OK");
  CHECK(fs::exists(ws.path("emit/g1-2cnf.cnf")));

  const auto f = ws.file("f.cnf", "p cnf 3 2\ne 2 3 0\n1 2 3 0\n-1 -2 0\n");
  const auto split = run({"chain", "--formula", f});
  CHECK(split.code == 0);
  CHECK(split["verify.split"] == "OK");
  CHECK(split["split.projected"] == split["split.paired"]);

  CHECK(run({"chain"}).code == 2);
}

TEST_CASE("builtin listing and exit codes") {
  const auto list = run({"builtin"});
  CHECK(list.code == 0);
  CHECK(list.out.find("builtin = incl-2cnf+") != std::string::npos);
  const auto show = run({"builtin", "dep-2cnf+"});
  CHECK(show["team_vars"] == "t");
  CHECK(run({"builtin", "nosuch"}).code == 3);

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"count-teams", "--structure", "/nonexistent/s.txt", "--formula", "x = x"}).code == 2);
  CHECK(run({"count-teams", "--formula", "x = x"}).code == 2);
  CHECK(run({"count-teams", "--jobs", "-1"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  Workspace ws;
  const auto s = ws.file("s.txt", "domain 3\n");
  const auto bad = run({"count-teams", "--structure", s, "--formula", "(x=y"});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("offset 4") != std::string::npos);
  CHECK(run({"count-teams", "--structure", s, "--formula", "x = y", "--vars", "x,y,z", "--budget", "64"}).code == 3);
}

TEST_CASE("reports are reproducible") {
  Workspace ws;
  const auto s = ws.file("s.txt", "domain 2\nrel E/2\n0 1\n1 1\n");
  const std::vector<std::string> args{"count-teams", "--structure", s, "--formula", "E y. (E(x,y) & inc(x;y))",
                                      "--verify", "--jobs", "2"};
  const auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(without_timing(a.out) == without_timing(b.out));
  CHECK(a.out.find("time.count_ms = ") != std::string::npos);
  CHECK(teamcount::fnv1a("") == 0xcbf29ce484222325ULL);
}
