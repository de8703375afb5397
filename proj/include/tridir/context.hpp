#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tridir/type.hpp"

namespace tridir {

// Ordinary variables (bound by fn) are values; fix variables are not.
enum class VarKind : std::uint8_t { Ordinary, Fix };

struct Binding {
  std::string name;
  VarKind kind = VarKind::Ordinary;
  Type type;

  friend bool operator==(const Binding& a, const Binding& b) {
    return a.kind == b.kind && a.name == b.name && a.type == b.type;
  }
};

// Γ: an ordered list of x:A / u:A assumptions without duplicate names.
// Extending with a name already present shadows (removes) the older entry.
class TypingContext {
 public:
  TypingContext() : entries_(empty_entries()) {}
  TypingContext(std::initializer_list<Binding> bs) : TypingContext() {
    for (const auto& b : bs) *this = extended(b);
  }

  const std::vector<Binding>& entries() const { return *entries_; }
  bool empty() const { return entries_->empty(); }
  std::size_t size() const { return entries_->size(); }
  std::size_t hash() const { return hash_; }

  const Binding* lookup(const std::string& name) const {
    for (auto it = entries_->rbegin(); it != entries_->rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

  TypingContext extended(Binding b) const {
    auto next = std::make_shared<std::vector<Binding>>();
    next->reserve(entries_->size() + 1);
    for (const auto& e : *entries_) {
      if (e.name != b.name) next->push_back(e);
    }
    next->push_back(std::move(b));
    return TypingContext(std::move(next));
  }

  friend bool operator==(const TypingContext& a, const TypingContext& b) {
    return a.entries_ == b.entries_ ||
           (a.hash_ == b.hash_ && *a.entries_ == *b.entries_);
  }

 private:
  explicit TypingContext(std::shared_ptr<const std::vector<Binding>> es)
      : entries_(std::move(es)) {
    for (const auto& e : *entries_) {
      hash_ = hash_combine(hash_, std::hash<std::string>{}(e.name));
      hash_ = hash_combine(hash_, static_cast<std::size_t>(e.kind));
      hash_ = hash_combine(hash_, e.type.hash());
    }
  }

  static std::shared_ptr<const std::vector<Binding>> empty_entries() {
    static const auto e = std::make_shared<const std::vector<Binding>>();
    return e;
  }

  std::shared_ptr<const std::vector<Binding>> entries_;
  std::size_t hash_ = 0x51ed;
};

inline std::string to_string(const TypingContext& g) {
  std::string out;
  for (const auto& b : g.entries()) {
    if (!out.empty()) out += ", ";
    out += b.name;
    out += " : ";
    out += to_string(b.type);
  }
  return out;
}

}  // namespace tridir
