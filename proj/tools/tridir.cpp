// tridir: command-line front end for the checkers, the let-normal
// translation, the evaluator and the differential harness.
//
// Exit codes: 0 accept/agreement, 1 reject/disagreement, 2 fuel exhausted,
// 3 usage, parse or scoping error.

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tridir/tridir.hpp"

namespace {

using namespace tridir;

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kFuel = 2;
constexpr int kUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SourceFile load(const std::string& path) { return parse(slurp(path)); }

// A source file, or a JSON term tree (bare or under "tree") as written by
// `translate --json`. Only the JSON form may contain lets.
struct Subject {
  TypingContext gamma;
  Term term = Term::hole();
  bool from_json = false;
};

Subject load_subject(const std::string& path) {
  const std::string text = slurp(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const Json j = Json::parse(text);
    Subject s;
    s.term = term_from_json(j.contains("tree") ? j.at("tree") : j);
    if (j.contains("gamma")) s.gamma = context_from_json(j.at("gamma"));
    s.from_json = true;
    return s;
  }
  SourceFile f = parse(text);
  return {f.gamma, f.subject, false};
}

std::optional<std::set<std::string>> atom_set(const SourceFile& f) {
  if (f.atoms.empty()) return std::nullopt;
  return std::set<std::string>(f.atoms.begin(), f.atoms.end());
}

System parse_system(const std::string& s) {
  if (s == "let") return System::LetNormal;
  if (s == "tri") return System::Tri;
  throw UsageError("unknown system " + s + " (expected let or tri)");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "heuristic") return Strategy::Heuristic;
  if (s == "exhaustive") return Strategy::Exhaustive;
  throw UsageError("unknown strategy " + s + " (expected heuristic or exhaustive)");
}

std::string translation_line(const Translation& t) {
  std::string out;
  for (const auto& b : t.bindings) {
    if (!out.empty()) out += ", ";
    out += b.name + "^" + (b.slack ? " ! " : " = ") + to_string(b.rhs);
  }
  return (out.empty() ? "." : out) + " + " + to_string(t.body);
}

struct CheckArgs {
  std::string file, against, system = "let", strategy = "heuristic";
  std::uint64_t fuel = 100000;
  bool json = false, derivation = false;
};

int cmd_check(const CheckArgs& a) {
  const SourceFile f = load(a.file);
  const Type c = parse_type(a.against, atom_set(f));
  const System sys = parse_system(a.system);
  const Term subject = sys == System::Tri ? f.subject : let_normal_form(f.subject);
  Checker checker(SearchOptions{sys, parse_strategy(a.strategy), a.fuel, false});
  const CheckOutcome out = checker.check(f.gamma, {}, subject, c, a.fuel);
  if (a.json) {
    Json j = {{"system", a.system},
              {"subject", to_string(subject)},
              {"type", to_string(c)},
              {"verdict", to_string(out.verdict)},
              {"fuel_used", out.fuel_used}};
    if (a.derivation && out.derivation) j["derivation"] = to_json(*out.derivation);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(out.verdict) << " (fuel " << out.fuel_used << ")\n";
    if (a.derivation && out.derivation) std::cout << to_text(*out.derivation);
  }
  switch (out.verdict) {
    case Verdict::Accept: return kAccept;
    case Verdict::Reject: return kReject;
    case Verdict::FuelExhausted: return kFuel;
  }
  return kUsage;
}

int cmd_synth(const CheckArgs& a) {
  const SourceFile f = load(a.file);
  const System sys = parse_system(a.system);
  const Term subject = sys == System::Tri ? f.subject : let_normal_form(f.subject);
  Checker checker(SearchOptions{sys, parse_strategy(a.strategy), a.fuel, false});
  const SynthOutcome out = checker.synth(f.gamma, {}, subject, a.fuel);
  if (a.json) {
    Json types = Json::array();
    for (const auto& r : out.results) {
      Json t = {{"type", to_string(r.type)}};
      if (a.derivation) t["derivation"] = to_json(r.derivation);
      types.push_back(t);
    }
    std::cout << Json{{"system", a.system},
                      {"subject", to_string(subject)},
                      {"fuel_exhausted", out.fuel_exhausted},
                      {"fuel_used", out.fuel_used},
                      {"types", types}}
                     .dump(2)
              << "\n";
  } else if (out.fuel_exhausted) {
    std::cout << "fuel-exhausted (fuel " << out.fuel_used << ")\n";
  } else {
    if (out.results.empty()) std::cout << "no type\n";
    for (const auto& r : out.results) {
      std::cout << to_string(r.type) << "\n";
      if (a.derivation) std::cout << to_text(r.derivation);
    }
  }
  if (out.fuel_exhausted) return kFuel;
  return out.results.empty() ? kReject : kAccept;
}

int cmd_translate(const std::string& file, bool json) {
  const SourceFile f = load(file);
  const Translation t = translate(f.subject);
  if (json) {
    Json j = to_json(t);
    j["gamma"] = to_json(f.gamma);
    j["tree"] = to_json(embed(t));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << translation_line(t) << "\n" << to_string(embed(t)) << "\n";
  }
  return kAccept;
}

// A source subject is translated first; a JSON term is taken as given.
Term let_normal_subject(const Subject& s) {
  return s.from_json ? s.term : let_normal_form(s.term);
}

int cmd_measure(const std::string& file, bool json) {
  const Subject s = load_subject(file);
  const Measure m = measure(let_normal_subject(s));
  if (json) std::cout << to_json(m).dump(2) << "\n";
  else std::cout << to_string(m) << "\n";
  return kAccept;
}

int cmd_unwind(const std::string& file) {
  const Subject s = load_subject(file);
  std::cout << to_string(unwind(let_normal_subject(s))) << "\n";
  return kAccept;
}

int cmd_eval(const std::string& file, std::size_t max_steps) {
  const SourceFile f = load(file);
  const EvalResult r = eval(f.subject, max_steps);
  switch (r.kind) {
    case EvalResult::Value:
      std::cout << to_string(r.term) << "\n" << "value after " << r.steps << " steps\n";
      return kAccept;
    case EvalResult::Stuck:
      std::cout << to_string(r.term) << "\n"
                << "stuck after " << r.steps << " steps: " << r.reason << "\n";
      return kReject;
    case EvalResult::OutOfSteps:
      std::cout << to_string(r.term) << "\n" << "no value within " << r.steps << " steps\n";
      return kFuel;
  }
  return kUsage;
}

struct DifferArgs {
  std::size_t size = 7, random = 500, random_size = 12;
  std::uint64_t seed = 1, fuel = 100000;
  double density = 0.3;
  bool json = false, records = false;
};

int cmd_differ(const DifferArgs& a) {
  Signature sig = Signature::defaults();
  sig.max_size = a.size;
  sig.random_count = a.random;
  sig.random_max_size = a.random_size;
  sig.seed = a.seed;
  sig.annotation_density = a.density;
  DifferentialRunner runner(sig.gamma, a.fuel);
  AgreementReport rep = runner.run_all(enumerate_terms(sig), sig.check_types, a.records);
  rep.merge(runner.run_all(gen_random_terms(sig), sig.check_types, a.records));
  if (a.json) {
    std::cout << to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "cases           " << rep.cases << "\n"
              << "both accept     " << rep.both_accept << "\n"
              << "both reject     " << rep.both_reject << "\n"
              << "fuel exhausted  " << rep.fuel_exhausted << "\n"
              << "disagreements   " << rep.disagreements.size() << "\n";
    for (const auto& r : rep.disagreements) {
      std::cout << "  " << to_string(r.term) << " <= " << to_string(r.type) << ": tri "
                << to_string(r.tri) << ", let " << to_string(r.ln) << "\n";
    }
  }
  return rep.agrees() ? kAccept : kReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typechecker for a call-by-value lambda calculus with intersection, union and "
               "empty types"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "check a term against a type");
  c->add_option("file", check.file, "source file")->required();
  c->add_option("--against", check.against, "type to check against")->required();
  c->add_option("--system", check.system, "let or tri")->capture_default_str();
  c->add_option("--fuel", check.fuel, "search budget")->capture_default_str();
  c->add_option("--strategy", check.strategy, "heuristic or exhaustive")->capture_default_str();
  c->add_flag("--json", check.json, "JSON output");
  c->add_flag("--derivation", check.derivation, "print the derivation");

  CheckArgs synth;
  auto* s = app.add_subcommand("synth", "list the types a term synthesizes");
  s->add_option("file", synth.file, "source file")->required();
  s->add_option("--system", synth.system, "let or tri")->capture_default_str();
  s->add_option("--fuel", synth.fuel, "search budget")->capture_default_str();
  s->add_option("--strategy", synth.strategy, "heuristic or exhaustive")->capture_default_str();
  s->add_flag("--json", synth.json, "JSON output");
  s->add_flag("--derivation", synth.derivation, "print derivations");

  std::string tr_file;
  bool tr_json = false;
  auto* t = app.add_subcommand("translate", "print the let-normal translation");
  t->add_option("file", tr_file, "source file")->required();
  t->add_flag("--json", tr_json, "JSON output");

  std::string me_file;
  bool me_json = false;
  auto* m = app.add_subcommand("measure", "print the distance from canonical let-normal form");
  m->add_option("file", me_file, "source file or JSON term")->required();
  m->add_flag("--json", me_json, "JSON output");

  std::string un_file;
  auto* u = app.add_subcommand("unwind", "substitute let bindings back into the body");
  u->add_option("file", un_file, "source file or JSON term")->required();

  std::string ev_file;
  std::size_t max_steps = 1000;
  auto* e = app.add_subcommand("eval", "evaluate a closed term");
  e->add_option("file", ev_file, "source file")->required();
  e->add_option("--max-steps", max_steps, "step bound")->capture_default_str();

  DifferArgs differ;
  auto* d = app.add_subcommand("differ", "compare both systems over generated terms");
  d->add_option("--size", differ.size, "largest enumerated term")->capture_default_str();
  d->add_option("--random", differ.random, "number of random terms")->capture_default_str();
  d->add_option("--random-size", differ.random_size, "largest random term")->capture_default_str();
  d->add_option("--seed", differ.seed, "random seed")->capture_default_str();
  d->add_option("--density", differ.density, "annotation density")->capture_default_str();
  d->add_option("--fuel", differ.fuel, "search budget")->capture_default_str();
  d->add_flag("--json", differ.json, "JSON output");
  d->add_flag("--records", differ.records, "include every case in JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (*c) return cmd_check(check);
    if (*s) return cmd_synth(synth);
    if (*t) return cmd_translate(tr_file, tr_json);
    if (*m) return cmd_measure(me_file, me_json);
    if (*u) return cmd_unwind(un_file);
    if (*e) return cmd_eval(ev_file, max_steps);
    if (*d) return cmd_differ(differ);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
  } catch (const IllScoped& err) {
    std::cerr << "scope error: " << err.what() << "\n";
  } catch (const IllFormed& err) {
    std::cerr << "ill-formed: " << err.what() << "\n";
  } catch (const UnboundLinear& err) {
    std::cerr << "unbound linear variable: " << err.what() << "\n";
  } catch (const JsonError& err) {
    std::cerr << "bad JSON: " << err.what() << "\n";
  } catch (const Json::exception& err) {
    std::cerr << "bad JSON: " << err.what() << "\n";
  } catch (const UsageError& err) {
    std::cerr << err.what() << "\n";
  }
  return kUsage;
}
