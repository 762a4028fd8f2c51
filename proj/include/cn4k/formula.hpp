// Formula AST, concrete syntax, and the subformula closure that bounds proof search.
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cn4k {

enum class Polarity { Pos, Neg };

class Formula;
// Interned: equal structure implies equal pointer, so Fml compares in O(1).
using Fml = const Formula*;

class Formula {
public:
  enum class Kind { Var, Neg, And, Or, Impl, Box, Dia };

  Kind kind;
  std::string name;       // Var only
  Fml l = nullptr;        // unary sub / binary left
  Fml r = nullptr;        // binary right
  uint64_t id;            // intern sequence number, total order within a run
  int size;               // connective count

  bool is(Kind k) const { return kind == k; }

private:
  friend class Interner;
  Formula() = default;
};

namespace detail {

struct NodeKey {
  Formula::Kind kind;
  std::string name;
  Fml l, r;
  bool operator==(const NodeKey& o) const {
    return kind == o.kind && l == o.l && r == o.r && name == o.name;
  }
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = static_cast<size_t>(k.kind);
    h = h * 1000003u ^ std::hash<std::string>{}(k.name);
    h = h * 1000003u ^ std::hash<const void*>{}(k.l);
    h = h * 1000003u ^ std::hash<const void*>{}(k.r);
    return h;
  }
};

} // namespace detail

class Interner {
public:
  static Interner& instance() {
    static Interner in;
    return in;
  }

  Fml get(Formula::Kind k, std::string name, Fml l, Fml r) {
    std::lock_guard<std::mutex> lock(mu_);
    detail::NodeKey key{k, name, l, r};
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    auto node = std::unique_ptr<Formula>(new Formula());
    node->kind = k;
    node->name = std::move(name);
    node->l = l;
    node->r = r;
    node->id = next_id_++;
    node->size = 1 + (l ? l->size : 0) + (r ? r->size : 0) - (k == Formula::Kind::Var ? 1 : 0);
    Fml p = node.get();
    table_.emplace(std::move(key), p);
    pool_.push_back(std::move(node));
    return p;
  }

private:
  std::mutex mu_;
  std::unordered_map<detail::NodeKey, Fml, detail::NodeKeyHash> table_;
  std::vector<std::unique_ptr<Formula>> pool_;
  uint64_t next_id_ = 0;
};

inline Fml var(std::string_view n) {
  return Interner::instance().get(Formula::Kind::Var, std::string(n), nullptr, nullptr);
}
inline Fml neg(Fml a) { return Interner::instance().get(Formula::Kind::Neg, {}, a, nullptr); }
inline Fml conj(Fml a, Fml b) { return Interner::instance().get(Formula::Kind::And, {}, a, b); }
inline Fml disj(Fml a, Fml b) { return Interner::instance().get(Formula::Kind::Or, {}, a, b); }
inline Fml impl(Fml a, Fml b) { return Interner::instance().get(Formula::Kind::Impl, {}, a, b); }
inline Fml box(Fml a) { return Interner::instance().get(Formula::Kind::Box, {}, a, nullptr); }
inline Fml dia(Fml a) { return Interner::instance().get(Formula::Kind::Dia, {}, a, nullptr); }
// phi <-> chi stands for (phi -> chi) & (chi -> phi)
inline Fml iff(Fml a, Fml b) { return conj(impl(a, b), impl(b, a)); }

inline int complexity(Fml f) { return f->size; }

// Deterministic total order on interned formulas (relies on deterministic construction order).
struct FmlIdLess {
  bool operator()(Fml a, Fml b) const { return a->id < b->id; }
};

using FmlSet = std::set<Fml, FmlIdLess>;

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(size_t p, const std::string& msg)
      : std::runtime_error(msg + " at offset " + std::to_string(p)), pos(p) {}
};

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  Fml formula() {
    Fml f = imp();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "trailing input");
    return f;
  }

private:
  std::string_view s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Fml imp() {
    Fml left = disjunction();
    if (eat("->")) return impl(left, imp());
    return left;
  }

  Fml disjunction() {
    Fml f = conjunction();
    while (true) {
      skip_ws();
      // '|' but not part of some longer token; the grammar has none, so plain check
      if (pos_ < s_.size() && s_[pos_] == '|') {
        ++pos_;
        f = disj(f, conjunction());
      } else {
        return f;
      }
    }
  }

  Fml conjunction() {
    Fml f = unary();
    while (eat("&")) f = conj(f, unary());
    return f;
  }

  Fml unary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    if (eat("~")) return neg(unary());
    if (eat("[]")) return box(unary());
    if (eat("<>")) return dia(unary());
    if (eat("(")) {
      Fml f = imp();
      if (!eat(")")) throw ParseError(pos_, "expected ')'");
      return f;
    }
    return ident();
  }

  Fml ident() {
    skip_ws();
    size_t start = pos_;
    if (pos_ >= s_.size() || !isalpha_(s_[pos_]))
      throw ParseError(pos_, "expected formula");
    ++pos_;
    while (pos_ < s_.size() && (isalpha_(s_[pos_]) || isdigit_(s_[pos_]) || s_[pos_] == '_')) ++pos_;
    return var(s_.substr(start, pos_ - start));
  }

  static bool isalpha_(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  static bool isdigit_(char c) { return c >= '0' && c <= '9'; }
};

} // namespace detail

inline Fml parse(std::string_view text) { return detail::Parser(text).formula(); }

namespace detail {

// Precedence levels: -> is 0, | is 1, & is 2, prefix operators 3.
inline int prec(Fml f) {
  switch (f->kind) {
    case Formula::Kind::Impl: return 0;
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    default: return 3;
  }
}

inline void render_rec(Fml f, int min_prec, std::string& out) {
  bool parens = prec(f) < min_prec;
  if (parens) out += '(';
  switch (f->kind) {
    case Formula::Kind::Var:
      out += f->name;
      break;
    case Formula::Kind::Neg:
      out += '~';
      render_rec(f->l, 3, out);
      break;
    case Formula::Kind::Box:
      out += "[]";
      render_rec(f->l, 3, out);
      break;
    case Formula::Kind::Dia:
      out += "<>";
      render_rec(f->l, 3, out);
      break;
    case Formula::Kind::And: // left-associative
      render_rec(f->l, 2, out);
      out += " & ";
      render_rec(f->r, 3, out);
      break;
    case Formula::Kind::Or:
      render_rec(f->l, 1, out);
      out += " | ";
      render_rec(f->r, 2, out);
      break;
    case Formula::Kind::Impl: // right-associative
      render_rec(f->l, 1, out);
      out += " -> ";
      render_rec(f->r, 0, out);
      break;
  }
  if (parens) out += ')';
}

} // namespace detail

inline std::string render(Fml f) {
  std::string out;
  detail::render_rec(f, 0, out);
  return out;
}

inline void subformulas_into(Fml f, FmlSet& out) {
  if (!out.insert(f).second) return;
  if (f->l) subformulas_into(f->l, out);
  if (f->r) subformulas_into(f->r, out);
}

inline FmlSet subformulas(Fml f) {
  FmlSet s;
  subformulas_into(f, s);
  return s;
}

inline bool neg_free(Fml f) {
  if (f->is(Formula::Kind::Neg)) return false;
  if (f->l && !neg_free(f->l)) return false;
  if (f->r && !neg_free(f->r)) return false;
  return true;
}

// Subformulas of f plus ~s and ~~s for every ~-free subformula s.
inline FmlSet closure(Fml f) {
  FmlSet s = subformulas(f);
  FmlSet out = s;
  for (Fml g : s) {
    if (neg_free(g)) {
      out.insert(neg(g));
      out.insert(neg(neg(g)));
    }
  }
  return out;
}

inline void variables_into(Fml f, std::set<std::string>& out) {
  if (f->is(Formula::Kind::Var)) {
    out.insert(f->name);
    return;
  }
  if (f->l) variables_into(f->l, out);
  if (f->r) variables_into(f->r, out);
}

inline std::set<std::string> variables(Fml f) {
  std::set<std::string> out;
  variables_into(f, out);
  return out;
}

} // namespace cn4k
