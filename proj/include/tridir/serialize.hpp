#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tridir/derivation.hpp"
#include "tridir/harness.hpp"
#include "tridir/letnormal.hpp"
#include "tridir/parser.hpp"

namespace tridir {

// JSON forms. Keys keep insertion order, so output is stable for equal
// inputs. Types and the subjects of judgments are written as text in the
// extended surface syntax; terms on their own are written as trees.

using Json = nlohmann::ordered_json;

class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json to_json(const Type& t) { return to_string(t); }

inline Json to_json(const TypingContext& g) {
  Json out = Json::array();
  for (const auto& b : g.entries()) {
    out.push_back({{"name", b.name},
                   {"kind", b.kind == VarKind::Fix ? "fix" : "ordinary"},
                   {"type", to_string(b.type)}});
  }
  return out;
}

inline Json to_json(const LinearContext& d) {
  Json out = Json::array();
  for (const auto& e : d.entries()) {
    if (e.is_slack()) out.push_back({{"name", e.name}, {"slack", to_string(*e.slack)}});
    else out.push_back({{"name", e.name}, {"type", to_string(*e.type)}});
  }
  return out;
}

inline Json to_json(const Term& e) {
  switch (e.kind()) {
    case TermKind::Var:
      return {{"kind", "var"}, {"name", e.name()}};
    case TermKind::FixVar:
      return {{"kind", "fixvar"}, {"name", e.name()}};
    case TermKind::LinVar:
      return {{"kind", "linvar"}, {"name", e.name()}};
    case TermKind::Hole:
      return {{"kind", "hole"}};
    case TermKind::Lam:
      return {{"kind", "fn"}, {"name", e.name()}, {"body", to_json(e.body())}};
    case TermKind::Fix:
      return {{"kind", "fix"}, {"name", e.name()}, {"body", to_json(e.body())}};
    case TermKind::App:
      return {{"kind", "app"}, {"fn", to_json(e.fn())}, {"arg", to_json(e.arg())}};
    case TermKind::Anno: {
      Json as = Json::array();
      for (const auto& a : e.annotations()) {
        as.push_back({{"context", to_json(a.context)}, {"type", to_string(a.type)}});
      }
      return {{"kind", "anno"}, {"subject", to_json(e.subject())}, {"annotations", as}};
    }
    case TermKind::Let:
    case TermKind::SlackLet:
      return {{"kind", e.is(TermKind::Let) ? "let" : "slack-let"},
              {"name", e.name()},
              {"rhs", to_json(e.rhs())},
              {"body", to_json(e.let_body())}};
  }
  return nullptr;
}

inline Json to_json(const Translation& t) {
  Json bs = Json::array();
  for (const auto& b : t.bindings) {
    bs.push_back({{"name", b.name}, {"slack", b.slack}, {"rhs", to_string(b.rhs)}});
  }
  return {{"bindings", bs}, {"body", to_string(t.body)}, {"term", to_string(embed(t))}};
}

inline Json to_json(const Measure& m) {
  return {{"unbound_synth", m.unbound_synth},
          {"brittle", m.brittle},
          {"prickly", m.prickly},
          {"transposed", m.transposed}};
}

inline Json to_json(const SubDerivation& s) {
  Json kids = Json::array();
  for (const auto& c : s.children) kids.push_back(to_json(c));
  return {{"rule", to_string(s.rule)},
          {"lower", to_string(s.lower)},
          {"upper", to_string(s.upper)},
          {"children", kids}};
}

inline Json to_json(const Derivation& d) {
  const Judgment& j = d.judgment;
  Json out = {{"rule", to_string(d.rule)},
              {"judgment",
               {{"gamma", to_json(j.gamma)},
                {"delta", to_json(j.delta)},
                {"term", to_string(j.subject)},
                {"direction", j.direction == Direction::Check ? "check" : "synth"},
                {"type", to_string(j.type)}}}};
  if (d.subtyping) out["subtyping"] = to_json(*d.subtyping);
  Json kids = Json::array();
  for (const auto& c : d.children) kids.push_back(to_json(c));
  out["children"] = kids;
  return out;
}

inline Json to_json(const CaseRecord& r) {
  Json out = {{"term", to_string(r.term)},
              {"type", to_string(r.type)},
              {"tri", to_string(r.tri)},
              {"let", to_string(r.ln)},
              {"tri_fuel", r.tri_fuel},
              {"let_fuel", r.ln_fuel}};
  if (r.tri_derivation) out["tri_derivation"] = to_json(*r.tri_derivation);
  if (r.ln_derivation) out["let_derivation"] = to_json(*r.ln_derivation);
  return out;
}

inline Json to_json(const AgreementReport& rep) {
  Json dis = Json::array();
  for (const auto& r : rep.disagreements) dis.push_back(to_json(r));
  Json out = {{"cases", rep.cases},
              {"both_accept", rep.both_accept},
              {"both_reject", rep.both_reject},
              {"fuel_exhausted", rep.fuel_exhausted},
              {"disagreements", dis}};
  if (!rep.records.empty()) {
    Json recs = Json::array();
    for (const auto& r : rep.records) recs.push_back(to_json(r));
    out["records"] = recs;
  }
  return out;
}

// Indented text rendering, one judgment per line:
//   rule  Δ |- e <= A      (checking)
//   rule  Δ |- e => A      (synthesis)
inline void print_derivation(std::string& out, const Derivation& d, std::size_t depth = 0) {
  const Judgment& j = d.judgment;
  out.append(2 * depth, ' ');
  out += to_string(d.rule);
  out += "  ";
  if (!j.delta.entries().empty()) out += to_string(j.delta) + " ";
  out += "|- " + to_string(j.subject);
  out += j.direction == Direction::Check ? " <= " : " => ";
  out += to_string(j.type);
  if (d.subtyping) out += "   [" + to_string(d.subtyping->lower) + " <: " + to_string(d.subtyping->upper) + "]";
  out += '\n';
  for (const auto& c : d.children) print_derivation(out, c, depth + 1);
}

inline std::string to_text(const Derivation& d) {
  std::string out;
  print_derivation(out, d);
  return out;
}

// ---------------------------------------------------------------------------
// Reading back

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw JsonError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string text_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw JsonError(std::string("field '") + key + "' is not a string");
  return v.get<std::string>();
}

}  // namespace detail

inline Type type_from_json(const Json& j) {
  if (!j.is_string()) throw JsonError("a type must be a string");
  return parse_type(j.get<std::string>());
}

inline TypingContext context_from_json(const Json& j) {
  if (!j.is_array()) throw JsonError("a context must be an array");
  TypingContext g;
  for (const auto& b : j) {
    const std::string kind = detail::text_field(b, "kind");
    if (kind != "fix" && kind != "ordinary") throw JsonError("unknown variable kind " + kind);
    g = g.extended({detail::text_field(b, "name"),
                    kind == "fix" ? VarKind::Fix : VarKind::Ordinary,
                    type_from_json(detail::field(b, "type"))});
  }
  return g;
}

inline LinearContext linear_context_from_json(const Json& j, const TypingContext& scope) {
  if (!j.is_array()) throw JsonError("a linear context must be an array");
  LinearContext d;
  for (const auto& e : j) {
    const std::string name = detail::text_field(e, "name");
    if (e.contains("slack")) {
      d = d.with(LinearEntry::slack_entry(name, parse_term(detail::text_field(e, "slack"), true, scope)));
    } else {
      d = d.with(LinearEntry::linear(name, type_from_json(detail::field(e, "type"))));
    }
  }
  return d;
}

inline Term term_from_json(const Json& j) {
  const std::string kind = detail::text_field(j, "kind");
  if (kind == "var") return Term::var(detail::text_field(j, "name"));
  if (kind == "fixvar") return Term::fix_var(detail::text_field(j, "name"));
  if (kind == "linvar") return Term::lin(detail::text_field(j, "name"));
  if (kind == "hole") return Term::hole();
  if (kind == "fn") return Term::lam(detail::text_field(j, "name"), term_from_json(detail::field(j, "body")));
  if (kind == "fix") return Term::fix(detail::text_field(j, "name"), term_from_json(detail::field(j, "body")));
  if (kind == "app") {
    return Term::app(term_from_json(detail::field(j, "fn")), term_from_json(detail::field(j, "arg")));
  }
  if (kind == "anno") {
    Annotations as;
    for (const auto& a : detail::field(j, "annotations")) {
      as.push_back({context_from_json(detail::field(a, "context")), type_from_json(detail::field(a, "type"))});
    }
    return Term::anno(term_from_json(detail::field(j, "subject")), std::move(as));
  }
  if (kind == "let" || kind == "slack-let") {
    Term rhs = term_from_json(detail::field(j, "rhs"));
    Term body = term_from_json(detail::field(j, "body"));
    const std::string x = detail::text_field(j, "name");
    return kind == "let" ? Term::let(x, rhs, body) : Term::slack_let(x, rhs, body);
  }
  throw JsonError("unknown term kind " + kind);
}

inline SubDerivation sub_derivation_from_json(const Json& j) {
  const auto rule = sub_rule_from_string(detail::text_field(j, "rule"));
  if (!rule) throw JsonError("unknown subtyping rule " + detail::text_field(j, "rule"));
  SubDerivation s{*rule, type_from_json(detail::field(j, "lower")),
                  type_from_json(detail::field(j, "upper")), {}};
  for (const auto& c : detail::field(j, "children")) s.children.push_back(sub_derivation_from_json(c));
  return s;
}

inline Derivation derivation_from_json(const Json& j) {
  const auto rule = rule_from_string(detail::text_field(j, "rule"));
  if (!rule) throw JsonError("unknown rule " + detail::text_field(j, "rule"));
  const Json& jj = detail::field(j, "judgment");
  const TypingContext g = context_from_json(detail::field(jj, "gamma"));
  const std::string dir = detail::text_field(jj, "direction");
  if (dir != "check" && dir != "synth") throw JsonError("unknown direction " + dir);
  Derivation d{*rule,
               Judgment{g, linear_context_from_json(detail::field(jj, "delta"), g),
                        parse_term(detail::text_field(jj, "term"), true, g),
                        dir == "check" ? Direction::Check : Direction::Synth,
                        type_from_json(detail::field(jj, "type"))},
               {},
               std::nullopt};
  if (j.contains("subtyping")) d.subtyping = sub_derivation_from_json(j.at("subtyping"));
  for (const auto& c : detail::field(j, "children")) d.children.push_back(derivation_from_json(c));
  return d;
}

}  // namespace tridir
