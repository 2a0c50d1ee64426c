#include "posmod/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "posmod/analysis.hpp"
#include "posmod/corpus.hpp"
#include "posmod/parallel.hpp"
#include "posmod/semantics.hpp"
#include "posmod/sexpr.hpp"

namespace posmod {

namespace {

struct Options {
  std::string theory;
  int max_size = 0;
  std::string fragment = "3,3,3";
  int tuple_cap = 2;
  std::string scope = "global";
  std::string format = "human";
  std::string out_dir;
  std::uint64_t budget = 0;
  int jobs = 1;
  bool count = false;
  std::vector<std::string> inputs;
  std::string map;
  bool qf_basis = false;
  bool complement = false;
  // corpus
  std::string variant = "T";
  int n = 4;
  int cap = 0;
  int p = 3;
  int k = 1;
  int g = 1;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Certificates and formulas are single-line, but keep the tab-separated
// records well formed whatever they contain.
std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

class Report {
 public:
  Report(std::string verb, bool machine, std::ostream& out) : verb_(std::move(verb)), machine_(machine), out_(out) {}

  void record(const std::string& verdict, const std::string& bound, const std::string& certificate) {
    if (machine_) {
      out_ << verb_ << '\t' << verdict << '\t' << bound << '\t' << one_line(certificate) << '\n';
    } else {
      out_ << verdict;
      if (!certificate.empty()) out_ << "  " << certificate;
      out_ << '\n';
    }
  }

  void verdict(const Verdict& v) {
    record(v.label(), bound_text(v), v.certificate);
    if (!machine_ && (v.kind == VerdictKind::HoldsWithin || v.kind == VerdictKind::NotRefutedUpTo ||
                      v.kind == VerdictKind::NotFoundWithin)) {
      note("exact for the models with at most " + std::to_string(v.bound) +
           " elements; the full class may differ");
    }
  }

  /// Human-only lines.
  void note(const std::string& line) {
    if (!machine_) out_ << "  " << line << '\n';
  }
  void line(const std::string& text) {
    if (!machine_) out_ << text << '\n';
  }

  static std::string bound_text(const Verdict& v) {
    switch (v.kind) {
      case VerdictKind::HoldsWithin:
      case VerdictKind::NotRefutedUpTo:
      case VerdictKind::NotFoundWithin:
      case VerdictKind::Inconclusive:
        return std::to_string(v.bound);
      default:
        return "-";
    }
  }

 private:
  std::string verb_;
  bool machine_;
  std::ostream& out_;
};

int exit_code(const Verdict& v) { return v.failed() ? kExitFails : kExitHolds; }

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int dispatch(const std::string& verb) {
    Report r(verb, o_.format == "machine", out_);
    if (verb == "models") return models(r);
    if (verb == "homs") return homs(r);
    if (verb == "check-immersion") return check_immersion_cmd(r);
    if (verb == "check-pc") return member_check(r, [](auto& a, auto& u) { return is_pc(a, u); });
    if (verb == "check-hmax") return member_check(r, [](auto& a, auto& u) { return is_h_maximal(a, u); });
    if (verb == "check-amalg") return member_check(r, [](auto& a, auto& u) { return is_amalgamation_basis(a, u); });
    if (verb == "check-complete") return complete(r);
    if (verb == "ctr") return ctr_cmd(r);
    if (verb == "check-robinson") return robinson(r);
    if (verb == "qe") return qe(r);
    if (verb == "corpus") return corpus_cmd(r);
    if (verb == "companion") return companion(r);
    throw UsageError("unknown verb " + verb);
  }

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Theory> theory_;

  const Theory& theory() {
    if (!theory_) {
      if (o_.theory.empty()) throw UsageError("this command needs -T <theory file>");
      theory_ = parse_theory(read_file(o_.theory));
    }
    return *theory_;
  }

  FinderOptions finder() const { return {o_.budget}; }

  int bound() const {
    if (o_.max_size < 1) throw UsageError("this command needs --max-size N with N >= 1");
    return o_.max_size;
  }

  ModelUniverse universe() {
    const Theory& t = theory();
    int n = bound();
    if (!o_.out_dir.empty()) {
      if (auto u = load_universe(o_.out_dir, t, n)) return *u;
    }
    ModelUniverse u = enumerate_models(t, n, finder());
    if (!o_.out_dir.empty()) save_universe(u, o_.out_dir);
    return u;
  }

  void store(const ModelUniverse& u) {
    if (!o_.out_dir.empty()) save_universe(u, o_.out_dir);
  }

  const std::string& input(std::size_t i, const char* what) {
    if (o_.inputs.size() <= i) throw UsageError(std::string("missing ") + what);
    return o_.inputs[i];
  }

  FiniteStructure structure(const std::string& path) {
    std::string text = read_file(path);
    if (!o_.theory.empty()) return parse_structure(text, theory().signature());
    return parse_structure(text);
  }

  // Two structure files over one signature: the theory's, or the union of
  // the inferred relation sets.
  std::pair<FiniteStructure, FiniteStructure> structure_pair() {
    FiniteStructure a = structure(input(0, "source structure"));
    FiniteStructure b = structure(input(1, "target structure"));
    if (a.signature() != b.signature()) {
      Signature merged = merge_signatures(a.signature(), b.signature());
      a = extend_signature(a, merged);
      b = extend_signature(b, merged);
    }
    return {a, b};
  }

  FormulaFragment fragment() const { return parse_fragment(o_.fragment); }

  int models(Report& r) {
    ModelUniverse u = universe();
    std::vector<std::size_t> per_size(static_cast<std::size_t>(u.bound()) + 1, 0);
    for (const auto& m : u.members()) ++per_size[m.size()];
    for (std::size_t i = 0; i < u.size(); ++i) r.record("MEMBER", std::to_string(u.bound()), serialize(u[i]));
    std::string counts;
    for (int s = 1; s <= u.bound(); ++s) counts += (s > 1 ? " " : "") + std::to_string(per_size[s]);
    r.record("COMPUTED", std::to_string(u.bound()), std::to_string(u.size()) + " members; by size " + counts);
    return kExitHolds;
  }

  int homs(Report& r) {
    auto [a, b] = structure_pair();
    if (o_.count) {
      std::string n = std::to_string(count_homomorphisms(a, b));
      if (o_.format == "machine") {
        r.record("COMPUTED", "-", n);
      } else {
        r.line(n);
      }
      return kExitHolds;
    }
    auto all = find_homomorphisms(a, b);
    for (const auto& h : all) r.record("HOM", "-", serialize_map(h));
    r.record("COMPUTED", "-", std::to_string(all.size()) + " homomorphisms");
    return kExitHolds;
  }

  int check_immersion_cmd(Report& r) {
    auto [a, b] = structure_pair();
    std::vector<ElementMap> maps;
    if (!o_.map.empty()) {
      ElementMap f = parse_map(o_.map, a.size());
      if (!is_homomorphism(a, b, f)) throw UsageError("the map is not a homomorphism");
      maps.push_back(f);
    } else {
      maps = find_homomorphisms(a, b);
    }
    for (const auto& f : maps) {
      ImmersionCheck c = check_immersion(a, b, f, true);
      if (!c.holds) {
        std::string cert = "hom " + serialize_map(f) + ": " + to_string(*c.formula) +
                           (c.formula_args.empty() ? " holds in the target but not in the source"
                                                   : " holds at the image of " + format_tuple(c.formula_args) +
                                                         " but not at " + format_tuple(c.formula_args));
        r.verdict(Verdict::fails(cert));
        return kExitFails;
      }
      if (!o_.map.empty()) r.note("retraction " + serialize_map(c.retraction));
    }
    r.verdict(Verdict::holds());
    if (o_.map.empty()) r.note(std::to_string(maps.size()) + " homomorphisms checked");
    return kExitHolds;
  }

  template <class Check>
  int member_check(Report& r, Check check) {
    ModelUniverse u = universe();
    FiniteStructure a = structure(input(0, "structure"));
    Verdict v = check(a, u);
    store(u);
    r.verdict(v);
    return exit_code(v);
  }

  int complete(Report& r) {
    ModelUniverse u = universe();
    Verdict v = is_complete(u);
    r.verdict(v);
    return exit_code(v);
  }

  int ctr_cmd(Report& r) {
    ModelUniverse u = universe();
    PositiveFormula phi = parse_formula(input(0, "formula"), theory().signature());
    CtrReport rep = ctr(u, phi, fragment(), {o_.qf_basis, o_.complement});
    store(u);
    r.line("phi " + to_string(rep.phi) + ", fragment " + to_string(rep.frag));
    for (const auto& e : rep.entries) {
      std::string cert = "psi " + to_string(e.psi);
      if (e.status.kind == VerdictKind::Refuted) cert += " countermodel " + e.status.certificate;
      if (e.qf) cert += " qf " + to_string(*e.qf);
      r.record(e.status.label(), Report::bound_text(e.status), cert);
    }
    if (rep.complement_requested) {
      if (rep.complement) {
        r.record("COMPLEMENT", std::to_string(rep.bound), to_string(*rep.complement));
      } else {
        r.record(Verdict::not_found(rep.bound).label(), std::to_string(rep.bound), "no complement in the fragment");
      }
    }
    return kExitHolds;
  }

  int robinson(Report& r) {
    RobinsonScope scope;
    if (o_.scope == "local") {
      scope = RobinsonScope::Local;
    } else if (o_.scope == "global") {
      scope = RobinsonScope::Global;
    } else {
      throw UsageError("--scope must be local or global");
    }
    ModelUniverse u = universe();
    Verdict v = check_robinson(u, o_.tuple_cap, scope);
    store(u);
    r.verdict(v);
    return exit_code(v);
  }

  int qe(Report& r) {
    ModelUniverse u = universe();
    PositiveFormula phi = parse_formula(input(0, "formula"), theory().signature());
    if (pc_members(u).empty()) {
      r.verdict(Verdict::inconclusive(u.bound(), "no pc member within the bound"));
      return kExitHolds;
    }
    auto psi = qe_check(u, phi, fragment());
    store(u);
    if (!psi) {
      r.verdict(Verdict::fails("no quantifier-free formula of " + o_.fragment + " agrees with " + to_string(phi) +
                               " on the pc members"));
      return kExitFails;
    }
    r.record(Verdict::holds_within(u.bound()).label(), std::to_string(u.bound()), to_string(*psi));
    r.note("equivalent on every pc member with at most " + std::to_string(u.bound()) + " elements");
    return kExitHolds;
  }

  int companion(Report& r) {
    Theory t1 = parse_theory(read_file(input(0, "first theory file")));
    Theory t2 = parse_theory(read_file(input(1, "second theory file")));
    Verdict v = companion_check(t1, t2, bound(), finder());
    r.verdict(v);
    return exit_code(v);
  }

  int corpus_cmd(Report& r) {
    const std::string& kind = input(0, "corpus kind (cycles, group or successor)");
    std::vector<std::pair<std::string, std::string>> files;
    if (kind == "cycles") {
      corpus::CycleVariant variant;
      std::string name;
      if (o_.variant == "T") {
        variant = corpus::CycleVariant::T;
        name = "T";
      } else if (o_.variant == "Tprime") {
        variant = corpus::CycleVariant::TPrime;
        name = "Tprime";
      } else if (o_.variant == "Tn") {
        variant = corpus::CycleVariant::Tn;
        name = "T" + std::to_string(o_.n);
      } else {
        throw UsageError("--variant must be T, Tprime or Tn");
      }
      int cap = o_.cap > 0 ? o_.cap : std::max(o_.n, o_.max_size);
      files.emplace_back(name + ".pmt", corpus::cycle_theory_text(variant, o_.n, cap));
      for (const auto& [label, s] : corpus::cycle_samples()) files.emplace_back(label + ".pms", serialize(s) + "\n");
    } else if (kind == "group") {
      FiniteStructure s = corpus::cyclic_group(o_.p, o_.k, o_.g);
      files.emplace_back("Tag+.pmt", corpus::group_theory_text());
      files.emplace_back("Z" + std::to_string(s.size()) + "_" + std::to_string(s.constant_value(1)) + ".pms",
                         serialize(s) + "\n");
    } else if (kind == "successor") {
      files.emplace_back("Tsucc.pmt", corpus::successor_theory_text());
      for (int p : {2, 3, 5}) files.emplace_back("F" + std::to_string(p) + ".pms", serialize(corpus::functional_cycle(p)) + "\n");
    } else {
      throw UsageError("unknown corpus " + kind);
    }
    if (!o_.out_dir.empty()) std::filesystem::create_directories(o_.out_dir);
    for (const auto& [file, text] : files) {
      if (!o_.out_dir.empty()) {
        write_file(std::filesystem::path(o_.out_dir) / file, text);
        r.record("WROTE", "-", (std::filesystem::path(o_.out_dir) / file).string());
      } else {
        r.line("; " + file);
        r.record("FILE", "-", file);
        if (o_.format != "machine") out_ << text;
      }
    }
    return kExitHolds;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"posmod: positive model theory over finite structures"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub, bool universe) {
    sub->add_option("-T,--theory", o.theory, "theory file (.pmt)");
    sub->add_option("--format", o.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    if (universe) {
      sub->add_option("--max-size", o.max_size, "universe bound");
      sub->add_option("--out", o.out_dir, "universe directory (reused when it matches)");
      sub->add_option("--budget", o.budget, "branching decisions per universe size (0 = unlimited)");
    }
  };

  auto* models = app.add_subcommand("models", "enumerate the models up to --max-size");
  common(models, true);
  auto* homs = app.add_subcommand("homs", "homomorphisms between two structures");
  common(homs, false);
  homs->add_option("structures", o.inputs, "SOURCE TARGET")->expected(2);
  homs->add_flag("--count", o.count, "print only the number of homomorphisms");
  auto* imm = app.add_subcommand("check-immersion", "is a homomorphism an immersion");
  common(imm, false);
  imm->add_option("structures", o.inputs, "SOURCE TARGET")->expected(2);
  imm->add_option("--map", o.map, "(map (SRC DST)*); default: every homomorphism");
  for (const char* verb : {"check-pc", "check-hmax", "check-amalg"}) {
    auto* sub = app.add_subcommand(verb, std::string(verb) + " for a structure within the universe");
    common(sub, true);
    sub->add_option("structure", o.inputs, "structure file (.pms)")->expected(1);
  }
  auto* complete = app.add_subcommand("check-complete", "joint continuation within the universe");
  common(complete, true);
  auto* ctr_cmd = app.add_subcommand("ctr", "refutation status of every fragment formula against phi");
  common(ctr_cmd, true);
  ctr_cmd->add_option("phi", o.inputs, "positive formula")->expected(1);
  ctr_cmd->add_option("--fragment", o.fragment, "m,v,k[,or]");
  ctr_cmd->add_flag("--qf-basis", o.qf_basis, "pair each survivor with a quantifier-free survivor it implies");
  ctr_cmd->add_flag("--complement", o.complement, "search a complement of phi");
  auto* rob = app.add_subcommand("check-robinson", "positive Robinson property of the pc members");
  common(rob, true);
  rob->add_option("--tuple-cap", o.tuple_cap, "longest tuple length")->check(CLI::PositiveNumber);
  rob->add_option("--scope", o.scope, "local or global");
  auto* qe = app.add_subcommand("qe", "quantifier-free equivalent on the pc members");
  common(qe, true);
  qe->add_option("phi", o.inputs, "positive formula")->expected(1);
  qe->add_option("--fragment", o.fragment, "m,v,k[,or]");
  auto* corpus_cmd = app.add_subcommand("corpus", "write example theories and structures");
  corpus_cmd->add_option("kind", o.inputs, "cycles, group or successor")->expected(1);
  corpus_cmd->add_option("--format", o.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  corpus_cmd->add_option("--out", o.out_dir, "output directory");
  corpus_cmd->add_option("--variant", o.variant, "T, Tprime or Tn");
  corpus_cmd->add_option("--n", o.n, "n for Tn");
  corpus_cmd->add_option("--cap", o.cap, "largest m with a collapse axiom (default max(n, --max-size))");
  corpus_cmd->add_option("--max-size", o.max_size, "universe bound the theory will be used with");
  corpus_cmd->add_option("--p", o.p, "prime");
  corpus_cmd->add_option("--k", o.k, "exponent");
  corpus_cmd->add_option("--g", o.g, "distinguished element");
  auto* comp = app.add_subcommand("companion", "same pc models up to --max-size");
  common(comp, true);
  comp->add_option("theories", o.inputs, "T1.pmt T2.pmt")->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitHolds : kExitUsage;
  }
  set_parallelism(o.jobs);
  const std::string verb = app.get_subcommands().front()->get_name();
  auto start = std::chrono::steady_clock::now();
  try {
    Runner runner(o, out, err);
    int code = runner.dispatch(verb);
    if (o.format == "human") {
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      err << "time " << std::fixed << std::setprecision(3) << secs << "s\n";
    }
    return code;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace posmod
