#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tridir/term.hpp"

namespace tridir {

// One Δ entry: either a linear assumption x^:A or a slack entry x^ ! (v : As)
// whose type has not been synthesized yet.
struct LinearEntry {
  std::string name;
  std::optional<Type> type;   // set for Linear entries
  std::optional<Term> slack;  // set for Slack entries

  static LinearEntry linear(std::string x, Type a) {
    return LinearEntry{std::move(x), std::move(a), std::nullopt};
  }
  static LinearEntry slack_entry(std::string x, Term v) {
    return LinearEntry{std::move(x), std::nullopt, std::move(v)};
  }

  bool is_slack() const { return slack.has_value(); }

  friend bool operator==(const LinearEntry& a, const LinearEntry& b) {
    return a.name == b.name && a.type == b.type && a.slack == b.slack;
  }
};

// Δ: ordered linear assumptions without duplicate names.
class LinearContext {
 public:
  LinearContext() = default;
  LinearContext(std::initializer_list<LinearEntry> es) : entries_(es) {}
  explicit LinearContext(std::vector<LinearEntry> es) : entries_(std::move(es)) {}

  const std::vector<LinearEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  const LinearEntry* lookup(const std::string& x) const {
    for (const auto& e : entries_) {
      if (e.name == x) return &e;
    }
    return nullptr;
  }

  bool has_slack() const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const LinearEntry& e) { return e.is_slack(); });
  }

  LinearContext with(LinearEntry e) const {
    LinearContext out = *this;
    out.entries_.push_back(std::move(e));
    return out;
  }

  // Replaces the entry named e.name in place.
  LinearContext replaced(const LinearEntry& e) const {
    LinearContext out = *this;
    for (auto& cur : out.entries_) {
      if (cur.name == e.name) cur = e;
    }
    return out;
  }

  LinearContext without(const std::string& x) const {
    LinearContext out;
    for (const auto& e : entries_) {
      if (e.name != x) out.entries_.push_back(e);
    }
    return out;
  }

  // Splits into (entries named in `names`, the rest), preserving order.
  template <class Names>
  std::pair<LinearContext, LinearContext> split(const Names& names) const {
    std::pair<LinearContext, LinearContext> out;
    for (const auto& e : entries_) {
      if (std::find(names.begin(), names.end(), e.name) != names.end()) {
        out.first.entries_.push_back(e);
      } else {
        out.second.entries_.push_back(e);
      }
    }
    return out;
  }

  friend bool operator==(const LinearContext& a, const LinearContext& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<LinearEntry> entries_;
};

inline std::string to_string(const LinearContext& d) {
  std::string out;
  for (const auto& e : d.entries()) {
    if (!out.empty()) out += ", ";
    out += e.name + "^";
    if (e.is_slack()) {
      out += " ! " + to_string(*e.slack);
    } else {
      out += " : " + to_string(*e.type);
    }
  }
  return out;
}

}  // namespace tridir
