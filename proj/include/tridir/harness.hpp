#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tridir/checker.hpp"
#include "tridir/letnormal.hpp"
#include "tridir/syntax.hpp"

namespace tridir {

// Every type of depth at most `depth` over the given leaves (a leaf has
// depth 1), ordered by depth, then by constructor and operands.
inline std::vector<Type> enumerate_types(const std::vector<Type>& leaves, std::size_t depth) {
  std::vector<std::vector<Type>> by_depth{{}, leaves};
  for (std::size_t d = 2; d <= depth; ++d) {
    std::vector<Type> lower;
    for (std::size_t k = 1; k < d; ++k) lower.insert(lower.end(), by_depth[k].begin(), by_depth[k].end());
    std::vector<Type> out;
    for (int op = 0; op < 3; ++op) {
      for (const auto& a : lower) {
        for (const auto& b : lower) {
          if (a.depth() != d - 1 && b.depth() != d - 1) continue;
          out.push_back(op == 0 ? Type::arrow(a, b) : op == 1 ? Type::meet(a, b) : Type::join(a, b));
        }
      }
    }
    by_depth.push_back(std::move(out));
  }
  std::vector<Type> all;
  for (std::size_t d = 1; d <= depth && d < by_depth.size(); ++d) {
    all.insert(all.end(), by_depth[d].begin(), by_depth[d].end());
  }
  return all;
}

struct Signature {
  std::vector<std::string> atoms;
  TypingContext gamma;
  std::vector<Type> check_types;
  std::size_t max_size = 7;
  // Annotation lists that enumeration and random generation draw from.
  std::vector<Annotations> annotations;
  // Probability that an application's function is annotated (random terms).
  double annotation_density = 0.3;
  std::uint64_t seed = 1;
  std::size_t random_count = 500;
  std::size_t random_max_size = 12;

  static Signature defaults() {
    const Type p = Type::base("P"), q = Type::base("Q"), bot = Type::bot();
    Signature s;
    s.atoms = {"P", "Q"};
    s.gamma = TypingContext{
        {"x", VarKind::Ordinary, p},
        {"f", VarKind::Ordinary, Type::arrow(p, q)},
        {"g", VarKind::Ordinary, Type::meet(Type::arrow(p, q), Type::arrow(p, p))},
        {"h", VarKind::Ordinary, Type::join(p, q)},
        {"w", VarKind::Ordinary, Type::arrow(p, bot)},
    };
    s.check_types = enumerate_types({p, q, bot}, 2);
    // Two annotations keep the size-7 corpus at desk scale: one without a
    // principal type, and one whose first entry only applies under a
    // binder y0 : P.
    const TypingContext y0p{{"y0", VarKind::Ordinary, p}};
    s.annotations = {
        {{TypingContext{}, Type::arrow(p, q)}, {TypingContext{}, Type::arrow(p, p)}},
        {{y0p, Type::join(q, p)}, {TypingContext{}, Type::arrow(p, bot)}},
    };
    return s;
  }
};

namespace detail {

struct ScopeVar {
  std::string name;
  VarKind kind;
};

class Enumerator {
 public:
  explicit Enumerator(const Signature& sig) : sig_(sig) {
    for (const auto& b : sig.gamma.entries()) {
      if (b.kind == VarKind::Ordinary) globals_.push_back(Term::var(b.name));
      else globals_.push_back(Term::fix_var(b.name));
    }
  }

  // All terms of exactly `n` nodes under the given binder scope.
  const std::vector<Term>& of_size(std::size_t n, const std::vector<ScopeVar>& scope) {
    std::string key = std::to_string(n) + ":";
    for (const auto& s : scope) key += s.kind == VarKind::Ordinary ? 'o' : 'f';
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (n == 1) {
      out = globals_;
      for (const auto& s : scope) {
        out.push_back(s.kind == VarKind::Ordinary ? Term::var(s.name) : Term::fix_var(s.name));
      }
    } else {
      const std::string d = std::to_string(scope.size());
      auto inner = scope;
      inner.push_back({"y" + d, VarKind::Ordinary});
      for (const auto& b : of_size(n - 1, inner)) out.push_back(Term::lam("y" + d, b));
      inner.back() = {"u" + d, VarKind::Fix};
      for (const auto& b : of_size(n - 1, inner)) out.push_back(Term::fix("u" + d, b));
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const auto& fns = of_size(k, scope);
        const auto& args = of_size(n - 1 - k, scope);
        for (const auto& f : fns) {
          for (const auto& a : args) out.push_back(Term::app(f, a));
        }
      }
      for (const auto& as : shared_annos()) {
        for (const auto& s : of_size(n - 1, scope)) out.push_back(Term::anno(s, as));
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  const std::vector<std::shared_ptr<const Annotations>>& shared_annos() {
    if (annos_.empty()) {
      for (const auto& as : sig_.annotations) annos_.push_back(std::make_shared<const Annotations>(as));
    }
    return annos_;
  }

  const Signature& sig_;
  std::vector<Term> globals_;
  std::vector<std::shared_ptr<const Annotations>> annos_;
  std::map<std::string, std::vector<Term>> memo_;
};

}  // namespace detail

// Every term of size 1..max_size whose free variables are declared in the
// signature's context, ordered by size. Bound variables are named by binder
// depth, so no two results are alpha-equivalent.
inline std::vector<Term> enumerate_terms(const Signature& sig) {
  detail::Enumerator en(sig);
  std::vector<Term> out;
  for (std::size_t n = 1; n <= sig.max_size; ++n) {
    const auto& terms = en.of_size(n, {});
    out.insert(out.end(), terms.begin(), terms.end());
  }
  return out;
}

// A random well-scoped term of at most `max_size` nodes. Each application's
// function is wrapped in an annotation from the palette with probability
// `density`; no other annotations are produced.
template <class Rng>
Term gen_random_term(const TypingContext& gamma, const std::vector<Annotations>& palette,
                     std::size_t max_size, double density, Rng& rng) {
  std::vector<detail::ScopeVar> scope;
  for (const auto& b : gamma.entries()) scope.push_back({b.name, b.kind});
  const std::size_t globals = scope.size();

  std::function<Term(std::size_t)> gen = [&](std::size_t budget) -> Term {
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto leaf = [&]() -> Term {
      const auto& s = scope[pick(scope.size())];
      return s.kind == VarKind::Ordinary ? Term::var(s.name) : Term::fix_var(s.name);
    };
    if (budget <= 1) return leaf();
    const std::size_t roll = pick(10);
    if (roll < 2) return leaf();
    if (roll < 4 || (roll < 5 && budget == 2)) {
      const std::string y = "y" + std::to_string(scope.size() - globals);
      scope.push_back({y, VarKind::Ordinary});
      Term body = gen(budget - 1);
      scope.pop_back();
      return Term::lam(y, body);
    }
    if (roll < 5) {
      const std::string u = "u" + std::to_string(scope.size() - globals);
      scope.push_back({u, VarKind::Fix});
      Term body = gen(budget - 1);
      scope.pop_back();
      return Term::fix(u, body);
    }
    if (budget < 3) return leaf();
    const bool annotate = !palette.empty() && std::bernoulli_distribution(density)(rng);
    // An annotated application needs room for both leaves.
    if (annotate && budget < 4) return leaf();
    const std::size_t room = budget - 1 - (annotate ? 1 : 0);
    const std::size_t fn_size = 1 + pick(room - 1);
    Term fn = gen(fn_size);
    Term arg = gen(room - fn_size);
    if (annotate) fn = Term::anno(fn, palette[pick(palette.size())]);
    return Term::app(fn, arg);
  };
  return gen(max_size);
}

inline Term gen_random_term(const Signature& sig, std::mt19937_64& rng) {
  return gen_random_term(sig.gamma, sig.annotations, sig.random_max_size, sig.annotation_density,
                         rng);
}

// The signature's random corpus: random_count terms drawn from its seed.
inline std::vector<Term> gen_random_terms(const Signature& sig) {
  std::mt19937_64 rng(sig.seed);
  std::vector<Term> out;
  out.reserve(sig.random_count);
  for (std::size_t i = 0; i < sig.random_count; ++i) out.push_back(gen_random_term(sig, rng));
  return out;
}

// ---------------------------------------------------------------------------
// Differential checking

struct CaseRecord {
  Term term;
  Type type;
  Verdict tri = Verdict::Reject;
  Verdict ln = Verdict::Reject;
  std::uint64_t tri_fuel = 0;
  std::uint64_t ln_fuel = 0;
  // Kept only for disagreements, for triage.
  std::optional<Derivation> tri_derivation;
  std::optional<Derivation> ln_derivation;

  bool definitive() const {
    return tri != Verdict::FuelExhausted && ln != Verdict::FuelExhausted;
  }
  bool disagrees() const { return definitive() && tri != ln; }
};

struct AgreementReport {
  std::size_t cases = 0;
  std::size_t both_accept = 0;
  std::size_t both_reject = 0;
  std::size_t fuel_exhausted = 0;
  std::vector<CaseRecord> disagreements;
  std::vector<CaseRecord> records;  // every case, when requested

  void add(const CaseRecord& r, bool keep = false) {
    ++cases;
    if (!r.definitive()) ++fuel_exhausted;
    else if (r.disagrees()) disagreements.push_back(r);
    else if (r.tri == Verdict::Accept) ++both_accept;
    else ++both_reject;
    if (keep) records.push_back(r);
  }

  void merge(const AgreementReport& o) {
    cases += o.cases;
    both_accept += o.both_accept;
    both_reject += o.both_reject;
    fuel_exhausted += o.fuel_exhausted;
    disagreements.insert(disagreements.end(), o.disagreements.begin(), o.disagreements.end());
    records.insert(records.end(), o.records.begin(), o.records.end());
  }

  bool agrees() const { return disagreements.empty(); }
};

// Sees every case together with both full outcomes.
using CaseObserver =
    std::function<void(const CaseRecord&, const CheckOutcome& tri, const CheckOutcome& ln)>;

// Checks one term against each type in both systems: the source term with
// the tridirectional checker, its let-normal form with the let-normal checker.
// Checkers are shared across the types so their memo tables are reused.
class DifferentialRunner {
 public:
  DifferentialRunner(TypingContext gamma, std::uint64_t fuel,
                     Strategy strategy = Strategy::Heuristic)
      : gamma_(std::move(gamma)), fuel_(fuel), strategy_(strategy) {}

  void observe(CaseObserver obs) { observer_ = std::move(obs); }

  std::vector<CaseRecord> run(const Term& e, const std::vector<Type>& types) {
    Checker tri(SearchOptions{System::Tri, strategy_, fuel_, false});
    Checker ln(SearchOptions{System::LetNormal, strategy_, fuel_, false});
    const Term t = let_normal_form(e);
    std::vector<CaseRecord> out;
    for (const auto& c : types) {
      CaseRecord r{e, c};
      const CheckOutcome a = tri.check(gamma_, {}, e, c, fuel_);
      const CheckOutcome b = ln.check(gamma_, {}, t, c, fuel_);
      r.tri = a.verdict;
      r.ln = b.verdict;
      r.tri_fuel = a.fuel_used;
      r.ln_fuel = b.fuel_used;
      if (r.disagrees()) {
        r.tri_derivation = a.derivation;
        r.ln_derivation = b.derivation;
      }
      if (observer_) observer_(r, a, b);
      out.push_back(std::move(r));
    }
    return out;
  }

  AgreementReport run_all(const std::vector<Term>& terms, const std::vector<Type>& types,
                          bool keep_records = false) {
    AgreementReport rep;
    for (const auto& e : terms) {
      for (const auto& r : run(e, types)) rep.add(r, keep_records);
    }
    return rep;
  }

 private:
  TypingContext gamma_;
  std::uint64_t fuel_;
  Strategy strategy_;
  CaseObserver observer_;
};

inline CaseRecord differential_check(const TypingContext& gamma, const Term& e, const Type& c,
                                     std::uint64_t fuel = 100000,
                                     Strategy strategy = Strategy::Heuristic) {
  DifferentialRunner r(gamma, fuel, strategy);
  return r.run(e, {c}).front();
}

// Runs the exhaustive corpus and then the random corpus of a signature.
inline AgreementReport differential_corpus(const Signature& sig, std::uint64_t fuel,
                                           CaseObserver obs = {}) {
  DifferentialRunner r(sig.gamma, fuel);
  if (obs) r.observe(std::move(obs));
  AgreementReport rep = r.run_all(enumerate_terms(sig), sig.check_types);
  rep.merge(r.run_all(gen_random_terms(sig), sig.check_types));
  return rep;
}

// Whether heuristic and exhaustive search reach the same verdict for one
// system. Cases where either search runs out of fuel are not compared.
struct StrategyMismatch {
  System system;
  Term term;
  Type type;
  Verdict heuristic;
  Verdict exhaustive;
};

inline std::vector<StrategyMismatch> strategy_agreement(const TypingContext& gamma,
                                                        const Term& e,
                                                        const std::vector<Type>& types,
                                                        std::uint64_t fuel) {
  std::vector<StrategyMismatch> out;
  for (System sys : {System::Tri, System::LetNormal}) {
    const Term subject = sys == System::Tri ? e : let_normal_form(e);
    Checker h(SearchOptions{sys, Strategy::Heuristic, fuel, false});
    Checker x(SearchOptions{sys, Strategy::Exhaustive, fuel, false});
    for (const auto& c : types) {
      const Verdict a = h.check(gamma, {}, subject, c, fuel).verdict;
      const Verdict b = x.check(gamma, {}, subject, c, fuel).verdict;
      if (a == Verdict::FuelExhausted || b == Verdict::FuelExhausted || a == b) continue;
      out.push_back({sys, e, c, a, b});
    }
  }
  return out;
}

}  // namespace tridir
