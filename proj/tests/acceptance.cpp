// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Limits are fixed here, not taken from the command line.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tridir/tridir.hpp"
#include "type_oracle.hpp"

using namespace tridir;

namespace {

constexpr double kExampleSeconds = 1.0;
constexpr std::uint64_t kExampleFuel = 10000;
constexpr double kCorpusSeconds = 600.0;
constexpr std::size_t kCorpusMaxSize = 7;
constexpr std::size_t kRandomCount = 500;
constexpr std::size_t kRandomMaxSize = 12;
constexpr std::uint64_t kCorpusFuel = 100000;
constexpr std::size_t kCanonicalTerms = 1000;
constexpr double kSubtypingSeconds = 60.0;
constexpr std::size_t kEvalSteps = 1000;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;
std::string lines[9];

void report(int n, bool ok, const std::string& what) {
  lines[n] = std::string(ok ? "PASS" : "FAIL") + " criterion " + std::to_string(n) + ": " + what;
  if (!ok) ++failures;
}

// Derivations seen across all criteria, for criterion 8.
std::size_t derivations_seen = 0;
std::size_t derivations_bad = 0;
std::string first_bad;

void replay(const CheckOutcome& r, System sys, const Term& e) {
  if (!r.derivation) return;
  ++derivations_seen;
  const auto v = validate(*r.derivation, sys);
  if (!v.ok) {
    if (derivations_bad++ == 0) first_bad = to_string(e) + ": " + v.error;
  }
}

void criterion1() {
  const TypingContext g = parse_context(
      "map : (int -> int) -> (s -> s) /\\ (n -> n), f : int -> int, filter : int -> s \\/ n, n : int");
  const Term e = parse_term("(map f) (filter n)");
  const Type c = parse_type("s \\/ n");
  const auto t0 = Clock::now();
  const auto a = tri_check(g, {}, e, c, kExampleFuel);
  const auto b = ln_check(g, {}, let_normal_form(e), c, kExampleFuel);
  const double secs = since(t0);
  replay(a, System::Tri, e);
  replay(b, System::LetNormal, e);
  const bool ok = a.accepted() && b.accepted() && secs < kExampleSeconds &&
                  a.fuel_used <= kExampleFuel && b.fuel_used <= kExampleFuel;
  report(1, ok,
         "map/filter checks against s \\/ n: tri " + std::string(to_string(a.verdict)) + " (fuel " +
             std::to_string(a.fuel_used) + "), let " + to_string(b.verdict) + " (fuel " +
             std::to_string(b.fuel_used) + "), " + std::to_string(secs) + " s");
}

void criterion2() {
  const TypingContext g = parse_context("x : (A1 -> B) /\\ (A2 -> B), y : A1 \\/ A2");
  const Term e = parse_term("x y");
  const Term l = let_normal_form(e);
  const Type c = parse_type("B");
  const auto t0 = Clock::now();
  const auto a = tri_check(g, {}, e, c);
  const auto b = ln_check(g, {}, l, c);
  Checker forced(SearchOptions{System::LetNormal, Strategy::Heuristic, 100000, true});
  Checker forced_all(SearchOptions{System::LetNormal, Strategy::Exhaustive, 100000, true});
  const auto h = forced.check(g, {}, l, c);
  const auto x = forced_all.check(g, {}, l, c);
  const double secs = since(t0);
  replay(a, System::Tri, e);
  replay(b, System::LetNormal, l);
  const bool ok = a.accepted() && b.accepted() && h.verdict == Verdict::Reject &&
                  x.verdict == Verdict::Reject && secs < kExampleSeconds;
  report(2, ok,
         "x y against B: tri " + std::string(to_string(a.verdict)) + ", let " + to_string(b.verdict) +
             "; projection forced at the let: " + to_string(h.verdict) + " (heuristic), " +
             to_string(x.verdict) + " (exhaustive), " + std::to_string(secs) + " s");
}

// Criteria 3, 7 and 8 share one pass over the corpus.
void corpus_pass() {
  Signature sig = Signature::defaults();
  sig.max_size = kCorpusMaxSize;
  sig.random_count = kRandomCount;
  sig.random_max_size = kRandomMaxSize;

  std::size_t closed_accepted = 0, stuck = 0;
  std::string first_stuck;
  Term last = Term::hole();
  bool last_closed = false, last_evaluated = false;

  const auto t0 = Clock::now();
  const AgreementReport rep = differential_corpus(
      sig, kCorpusFuel, [&](const CaseRecord& r, const CheckOutcome& a, const CheckOutcome& b) {
        replay(a, System::Tri, r.term);
        replay(b, System::LetNormal, r.term);
        if (last.identity() != r.term.identity()) {
          last = r.term;
          last_closed = free_vars(r.term).empty();
          last_evaluated = false;
        }
        if (!last_closed || !a.accepted() || last_evaluated) return;
        last_evaluated = true;
        ++closed_accepted;
        const auto ev = eval(r.term, kEvalSteps);
        if (ev.kind == EvalResult::Stuck && stuck++ == 0) first_stuck = to_string(r.term);
      });
  const double secs = since(t0);

  std::string dis;
  if (!rep.disagreements.empty()) {
    const auto& d = rep.disagreements.front();
    dis = "; first: " + to_string(d.term) + " : " + to_string(d.type) + " tri " + to_string(d.tri) +
          " let " + to_string(d.ln);
  }
  report(3, rep.agrees() && secs < kCorpusSeconds,
         std::to_string(rep.cases) + " cases (sizes 1-" + std::to_string(kCorpusMaxSize) + " and " +
             std::to_string(kRandomCount) + " random up to " + std::to_string(kRandomMaxSize) +
             "): " + std::to_string(rep.disagreements.size()) + " disagreements, " +
             std::to_string(rep.both_accept) + " both accept, " + std::to_string(rep.both_reject) +
             " both reject, " + std::to_string(rep.fuel_exhausted) + " fuel exhausted, " +
             std::to_string(secs) + " s" + dis);
  report(7, closed_accepted > 0 && stuck == 0,
         std::to_string(closed_accepted) + " closed accepted terms evaluated for " +
             std::to_string(kEvalSteps) + " steps, " + std::to_string(stuck) + " stuck" +
             (stuck ? "; first: " + first_stuck : ""));
}

void criterion4() {
  Signature sig = Signature::defaults();
  sig.max_size = kCorpusMaxSize;
  const auto all = enumerate_terms(sig);
  std::vector<Term> picked;
  const std::size_t half = kCanonicalTerms / 2;
  for (std::size_t i = 0; i < half; ++i) picked.push_back(all[i * all.size() / half]);
  sig.random_count = kCanonicalTerms - half;
  sig.random_max_size = kRandomMaxSize;
  for (auto& e : gen_random_terms(sig)) picked.push_back(e);

  std::size_t bad = 0;
  std::string first;
  for (const auto& e : picked) {
    const Term l = embed(translate(e));
    std::string why;
    if (!measure(l).is_zero()) why = "measure " + to_string(measure(l));
    else if (!wf_letnormal(l)) why = "not well formed";
    else if (!alpha_eq(unwind(l), e)) why = "unwinds to " + to_string(unwind(l));
    if (!why.empty() && bad++ == 0) first = to_string(e) + ": " + why;
  }
  report(4, bad == 0 && picked.size() == kCanonicalTerms,
         std::to_string(picked.size()) + " terms, " + std::to_string(bad) + " failures" +
             (bad ? "; first: " + first : ""));
}

bool mentions(const Term& e, const std::string& x) {
  for (const auto& v : free_vars(e)) {
    if (v.name == x) return true;
  }
  return false;
}

void criterion5() {
  const TypingContext g = parse_context("w : int -> bot, x : int");
  const Term e = parse_term("(fix u => u) (w x)", false, g);
  const Translation tr = translate(e);
  // One binding for the whole application; w and x are bound only inside
  // its argument.
  bool nested = tr.bindings.size() == 1 && tr.bindings[0].rhs.is(TermKind::App);
  if (nested) {
    const Term fn = tr.bindings[0].rhs.fn(), arg = tr.bindings[0].rhs.arg();
    nested = fn.is(TermKind::Fix) && !mentions(fn, "w") && !mentions(fn, "x") &&
             arg.is(TermKind::Let) && mentions(arg, "w") && mentions(arg, "x") &&
             linear_occurrences(arg).empty();
    const Translation inner = split_bindings(arg);
    nested = nested && inner.bindings.size() == 3 && inner.body.is(TermKind::LinVar);
  }
  bool rejects = true;
  std::string verdicts;
  for (const char* atom : {"int", "P"}) {
    const Type c = Type::base(atom);
    const auto a = tri_check(g, {}, e, c);
    const auto b = ln_check(g, {}, embed(tr), c);
    rejects = rejects && a.verdict == Verdict::Reject && b.verdict == Verdict::Reject;
    verdicts += std::string(" ") + atom + ": tri " + to_string(a.verdict) + ", let " + to_string(b.verdict) + ";";
  }
  report(5, nested && rejects,
         std::string("argument bindings ") + (nested ? "nested" : "NOT nested") + " in " +
             to_string(embed(tr)) + ";" + verdicts);
}

void criterion6() {
  const auto t0 = Clock::now();
  oracle::Universe u(3);
  const int n = u.size();
  std::vector<Type> ts;
  for (int i = 0; i < n; ++i) ts.push_back(u.type(i));
  const std::size_t words = (n + 63) / 64;
  // le[a] has bit b set when a <: b.
  std::vector<std::vector<std::uint64_t>> le(n, std::vector<std::uint64_t>(words, 0));
  std::size_t refl_bad = 0, bot_bad = 0;
  for (int a = 0; a < n; ++a) {
    Subtyper s;
    for (int b = 0; b < n; ++b) {
      if (s(ts[a], ts[b])) le[a][b / 64] |= std::uint64_t{1} << (b % 64);
    }
    refl_bad += !s(ts[a], ts[a]);
    bot_bad += !subtype(Type::bot(), ts[a]);
  }
  std::uint64_t triples = 0, trans_bad = 0;
  for (int b = 0; b < n; ++b) {
    const auto& above = le[b];
    std::uint64_t above_count = 0;
    for (auto w : above) above_count += __builtin_popcountll(w);
    for (int a = 0; a < n; ++a) {
      if (!((le[a][b / 64] >> (b % 64)) & 1)) continue;
      triples += above_count;
      for (std::size_t w = 0; w < words; ++w) trans_bad += __builtin_popcountll(above[w] & ~le[a][w]);
    }
  }
  const bool distributes = subtype(parse_type("(P -> Q) /\\ (P -> R)"), parse_type("P -> Q /\\ R"));
  const double secs = since(t0);
  report(6, refl_bad == 0 && bot_bad == 0 && trans_bad == 0 && !distributes && secs < kSubtypingSeconds,
         std::to_string(n) + " types of depth <= 3: " + std::to_string(refl_bad) +
             " reflexivity failures, " + std::to_string(trans_bad) + " transitivity failures in " +
             std::to_string(triples) + " triples, " + std::to_string(bot_bad) +
             " bot failures; (P -> Q) /\\ (P -> R) <: P -> Q /\\ R " +
             (distributes ? "accepted" : "rejected") + ", " + std::to_string(secs) + " s");
}

void criterion8() {
  report(8, derivations_seen > 0 && derivations_bad == 0,
         std::to_string(derivations_seen) + " accept derivations replayed, " +
             std::to_string(derivations_bad) + " invalid" + (derivations_bad ? "; first: " + first_bad : ""));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  corpus_pass();
  criterion4();
  criterion5();
  criterion6();
  criterion8();
  for (int n = 1; n <= 8; ++n) std::printf("%s\n", lines[n].c_str());
  return failures == 0 ? 0 : 1;
}
