#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace tridir {

enum class TypeKind : std::uint8_t { Base, Bot, Arrow, Intersect, Union };

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Immutable type tree: base atoms, bot, arrows, intersections and unions.
// Copies share structure; equality is structural with a cached hash.
class Type {
 public:
  Type() : Type(bot()) {}

  static Type base(std::string name) {
    return Type(TypeKind::Base, std::move(name), {}, {});
  }
  static Type bot() {
    static const Type b(TypeKind::Bot, "", nullptr, nullptr);
    return b;
  }
  static Type arrow(Type dom, Type cod) {
    return Type(TypeKind::Arrow, "", std::move(dom.node_), std::move(cod.node_));
  }
  static Type meet(Type l, Type r) {
    return Type(TypeKind::Intersect, "", std::move(l.node_), std::move(r.node_));
  }
  static Type join(Type l, Type r) {
    return Type(TypeKind::Union, "", std::move(l.node_), std::move(r.node_));
  }

  TypeKind kind() const { return node_->kind; }
  bool is(TypeKind k) const { return node_->kind == k; }
  const std::string& name() const { return node_->name; }
  // Domain of an arrow, or left operand of a meet/join.
  Type left() const { return Type(node_->left); }
  // Codomain of an arrow, or right operand of a meet/join.
  Type right() const { return Type(node_->right); }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  friend bool operator==(const Type& a, const Type& b) {
    return a.node_ == b.node_ || equal_nodes(*a.node_, *b.node_);
  }
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  struct Node {
    TypeKind kind;
    std::string name;
    std::shared_ptr<const Node> left, right;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 1;
  };

  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  Type(TypeKind k, std::string name, std::shared_ptr<const Node> l,
       std::shared_ptr<const Node> r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->hash = hash_combine(static_cast<std::size_t>(k) + 1,
                           std::hash<std::string>{}(n->name));
    if (l) {
      n->hash = hash_combine(n->hash, l->hash);
      n->hash = hash_combine(n->hash, r->hash);
      n->size = 1 + l->size + r->size;
      n->depth = 1 + std::max(l->depth, r->depth);
    }
    n->left = std::move(l);
    n->right = std::move(r);
    node_ = std::move(n);
  }

  static bool equal_nodes(const Node& a, const Node& b) {
    if (a.hash != b.hash || a.kind != b.kind || a.size != b.size) return false;
    switch (a.kind) {
      case TypeKind::Bot:
        return true;
      case TypeKind::Base:
        return a.name == b.name;
      default:
        return (a.left == b.left || equal_nodes(*a.left, *b.left)) &&
               (a.right == b.right || equal_nodes(*a.right, *b.right));
    }
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

// Precedence levels: 0 arrow, 1 union, 2 intersection, 3 atomic.
inline int type_level(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Arrow: return 0;
    case TypeKind::Union: return 1;
    case TypeKind::Intersect: return 2;
    default: return 3;
  }
}

inline void print_type(std::string& out, const Type& t, int level) {
  const bool parens = type_level(t) < level;
  if (parens) out += '(';
  switch (t.kind()) {
    case TypeKind::Base:
      out += t.name();
      break;
    case TypeKind::Bot:
      out += "bot";
      break;
    case TypeKind::Arrow:
      print_type(out, t.left(), 1);
      out += " -> ";
      print_type(out, t.right(), 0);
      break;
    case TypeKind::Union:
      print_type(out, t.left(), 1);
      out += " \\/ ";
      print_type(out, t.right(), 2);
      break;
    case TypeKind::Intersect:
      print_type(out, t.left(), 2);
      out += " /\\ ";
      print_type(out, t.right(), 3);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

// ASCII rendering: `bot`, `A -> B` (right-assoc), `A /\ B`, `A \/ B`
// (left-assoc), with /\ binding tighter than \/ and \/ tighter than ->.
inline std::string to_string(const Type& t) {
  std::string out;
  detail::print_type(out, t, 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Type& t) {
  return os << to_string(t);
}

// The types reachable from `t` through intersection projections, starting
// with `t` itself (preorder, left first, duplicates removed).
inline std::vector<Type> projections(const Type& t) {
  std::vector<Type> out;
  std::vector<Type> stack{t};
  while (!stack.empty()) {
    Type cur = stack.back();
    stack.pop_back();
    bool seen = false;
    for (const auto& o : out) {
      if (o == cur) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    out.push_back(cur);
    if (cur.is(TypeKind::Intersect)) {
      stack.push_back(cur.right());
      stack.push_back(cur.left());
    }
  }
  return out;
}

// True if some projection of `t` is a union or bot, i.e. a left rule could
// eventually fire on an assumption of type `t`.
inline bool has_left_structure(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Union:
    case TypeKind::Bot:
      return true;
    case TypeKind::Intersect:
      return has_left_structure(t.left()) || has_left_structure(t.right());
    default:
      return false;
  }
}

// If `target` is reachable from `from` by intersection projections, the
// sequence of sides taken (false = left, true = right); empty if equal.
inline bool projection_path(const Type& from, const Type& target,
                            std::vector<bool>& path) {
  if (from == target) return true;
  if (!from.is(TypeKind::Intersect)) return false;
  path.push_back(false);
  if (projection_path(from.left(), target, path)) return true;
  path.back() = true;
  if (projection_path(from.right(), target, path)) return true;
  path.pop_back();
  return false;
}

}  // namespace tridir

template <>
struct std::hash<tridir::Type> {
  std::size_t operator()(const tridir::Type& t) const noexcept { return t.hash(); }
};
