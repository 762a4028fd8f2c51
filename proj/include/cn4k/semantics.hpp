// Finite frames and models with two valuations, the forcing relation, and
// frame-class validation. Worlds are indices 0..n-1; world sets are bitmasks.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formula.hpp"
#include "logic.hpp"

namespace cn4k {

// Bitmask limit; inputs are desk-scale by contract.
inline constexpr int kMaxWorlds = 30;

struct Rel {
  std::vector<uint32_t> row; // row[w] = set of R-successors of w

  Rel() = default;
  explicit Rel(int n) : row(n, 0) {}
  int n() const { return static_cast<int>(row.size()); }
  bool has(int a, int b) const { return (row[a] >> b) & 1u; }
  void add(int a, int b) { row[a] |= (1u << b); }
  bool operator==(const Rel& o) const { return row == o.row; }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n(); ++a)
      for (int b = 0; b < n(); ++b)
        if (has(a, b)) out.emplace_back(a, b);
    return out;
  }
};

struct Frame {
  std::vector<std::string> world_names;
  Rel leq, r_box_pos, r_box_neg, r_dia_pos, r_dia_neg;

  int n() const { return static_cast<int>(world_names.size()); }

  int world_index(const std::string& name) const {
    for (int i = 0; i < n(); ++i)
      if (world_names[i] == name) return i;
    return -1;
  }
};

struct Model {
  Frame frame;
  std::map<std::string, uint32_t> v_pos, v_neg; // variable -> world mask

  bool declares(const std::string& v) const {
    return v_pos.count(v) || v_neg.count(v);
  }
  uint32_t pos_of(const std::string& v) const {
    auto it = v_pos.find(v);
    return it == v_pos.end() ? 0u : it->second;
  }
  uint32_t neg_of(const std::string& v) const {
    auto it = v_neg.find(v);
    return it == v_neg.end() ? 0u : it->second;
  }
};

struct Report {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string msg) {
    ok = false;
    violations.push_back(std::move(msg));
  }
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Preorder laws on leq plus the relation equalities the class demands.
inline Report check_frame(const Frame& f, FrameClass cls) {
  Report rep;
  int n = f.n();
  if (n == 0) rep.fail("frame has no worlds");
  for (int w = 0; w < n; ++w)
    if (!f.leq.has(w, w))
      rep.fail("leq not reflexive: missing (" + f.world_names[w] + "," + f.world_names[w] + ")");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (f.leq.has(a, b))
        for (int c = 0; c < n; ++c)
          if (f.leq.has(b, c) && !f.leq.has(a, c))
            rep.fail("leq not transitive: (" + f.world_names[a] + "," + f.world_names[b] +
                     ") and (" + f.world_names[b] + "," + f.world_names[c] + ") but not (" +
                     f.world_names[a] + "," + f.world_names[c] + ")");
  auto require_eq = [&](const Rel& x, const char* xn, const Rel& y, const char* yn) {
    if (!(x == y)) rep.fail(std::string(xn) + " != " + yn + " (required by class)");
  };
  switch (cls) {
    case FrameClass::General:
      break;
    case FrameClass::PM:
      require_eq(f.r_box_pos, "r_box_pos", f.r_dia_pos, "r_dia_pos");
      require_eq(f.r_box_neg, "r_box_neg", f.r_dia_neg, "r_dia_neg");
      break;
    case FrameClass::YV:
      require_eq(f.r_box_pos, "r_box_pos", f.r_box_neg, "r_box_neg");
      require_eq(f.r_dia_pos, "r_dia_pos", f.r_dia_neg, "r_dia_neg");
      break;
    case FrameClass::Join:
      require_eq(f.r_box_pos, "r_box_pos", f.r_dia_neg, "r_dia_neg");
      require_eq(f.r_dia_pos, "r_dia_pos", f.r_box_neg, "r_box_neg");
      break;
    case FrameClass::Mono:
      require_eq(f.r_box_pos, "r_box_pos", f.r_box_neg, "r_box_neg");
      require_eq(f.r_box_pos, "r_box_pos", f.r_dia_pos, "r_dia_pos");
      require_eq(f.r_box_pos, "r_box_pos", f.r_dia_neg, "r_dia_neg");
      break;
  }
  return rep;
}

// Valuation monotonicity along leq, both polarities.
inline Report check_model(const Model& m) {
  Report rep;
  int n = m.frame.n();
  auto check_mono = [&](const std::map<std::string, uint32_t>& v, const char* which) {
    for (const auto& [p, mask] : v) {
      for (int w = 0; w < n; ++w) {
        if (!((mask >> w) & 1u)) continue;
        for (int w2 = 0; w2 < n; ++w2) {
          if (m.frame.leq.has(w, w2) && !((mask >> w2) & 1u))
            rep.fail(std::string(which) + "(" + p + ") not monotone: " + m.frame.world_names[w] +
                     " <= " + m.frame.world_names[w2]);
        }
      }
    }
  };
  check_mono(m.v_pos, "v_pos");
  check_mono(m.v_neg, "v_neg");
  return rep;
}

inline Polarity flip(Polarity p) { return p == Polarity::Pos ? Polarity::Neg : Polarity::Pos; }

// Direct recursion over the twelve support clauses.
inline bool supports(const Model& m, int w, Polarity pol, Fml f) {
  const Frame& fr = m.frame;
  int n = fr.n();
  if (w < 0 || w >= n) throw EvalError("world index out of range");
  bool pos = pol == Polarity::Pos;
  switch (f->kind) {
    case Formula::Kind::Var: {
      if (!m.declares(f->name)) throw EvalError("variable '" + f->name + "' not declared by model");
      uint32_t mask = pos ? m.pos_of(f->name) : m.neg_of(f->name);
      return (mask >> w) & 1u;
    }
    case Formula::Kind::Neg:
      return supports(m, w, flip(pol), f->l);
    case Formula::Kind::And:
      if (pos) return supports(m, w, pol, f->l) && supports(m, w, pol, f->r);
      return supports(m, w, pol, f->l) || supports(m, w, pol, f->r);
    case Formula::Kind::Or:
      if (pos) return supports(m, w, pol, f->l) || supports(m, w, pol, f->r);
      return supports(m, w, pol, f->l) && supports(m, w, pol, f->r);
    case Formula::Kind::Impl:
      if (pos) {
        for (int w2 = 0; w2 < n; ++w2)
          if (fr.leq.has(w, w2) && supports(m, w2, Polarity::Pos, f->l) &&
              !supports(m, w2, Polarity::Pos, f->r))
            return false;
        return true;
      }
      return supports(m, w, Polarity::Pos, f->l) && supports(m, w, Polarity::Neg, f->r);
    case Formula::Kind::Box:
      if (pos) {
        // all leq-successors, all r_box_pos-successors
        for (int w2 = 0; w2 < n; ++w2) {
          if (!fr.leq.has(w, w2)) continue;
          for (int u = 0; u < n; ++u)
            if (fr.r_box_pos.has(w2, u) && !supports(m, u, Polarity::Pos, f->l)) return false;
        }
        return true;
      }
      // all leq-successors have some r_box_neg-successor falsifying
      for (int w2 = 0; w2 < n; ++w2) {
        if (!fr.leq.has(w, w2)) continue;
        bool some = false;
        for (int u = 0; u < n && !some; ++u)
          if (fr.r_box_neg.has(w2, u) && supports(m, u, Polarity::Neg, f->l)) some = true;
        if (!some) return false;
      }
      return true;
    case Formula::Kind::Dia:
      if (pos) {
        for (int w2 = 0; w2 < n; ++w2) {
          if (!fr.leq.has(w, w2)) continue;
          bool some = false;
          for (int u = 0; u < n && !some; ++u)
            if (fr.r_dia_pos.has(w2, u) && supports(m, u, Polarity::Pos, f->l)) some = true;
          if (!some) return false;
        }
        return true;
      }
      for (int w2 = 0; w2 < n; ++w2) {
        if (!fr.leq.has(w, w2)) continue;
        for (int u = 0; u < n; ++u)
          if (fr.r_dia_neg.has(w2, u) && !supports(m, u, Polarity::Neg, f->l)) return false;
      }
      return true;
  }
  throw EvalError("unreachable formula kind");
}

// Formula interpretation of a sequent: /\Gamma -> phi (phi alone when Gamma is empty).
inline Fml sequent_interpretation(const std::vector<Fml>& ante, Fml succ) {
  if (ante.empty()) return succ;
  Fml acc = ante[0];
  for (size_t i = 1; i < ante.size(); ++i) acc = conj(acc, ante[i]);
  return impl(acc, succ);
}

inline bool sequent_holds(const Model& m, int w, const std::vector<Fml>& ante, Fml succ) {
  return supports(m, w, Polarity::Pos, sequent_interpretation(ante, succ));
}

// Up-closed world sets of the preorder, in increasing mask order.
inline std::vector<uint32_t> upward_closed_sets(const Rel& leq) {
  int n = leq.n();
  if (n > 16) throw EvalError("frame too large for valuation enumeration");
  std::vector<uint32_t> out;
  for (uint32_t s = 0; s < (1u << n); ++s) {
    bool good = true;
    for (int w = 0; w < n && good; ++w)
      if ((s >> w) & 1u) {
        // all leq-successors of w must be in s
        if ((leq.row[w] & ~s) != 0) good = false;
      }
    if (good) out.push_back(s);
  }
  return out;
}

struct FrameValidity {
  bool valid = true;
  std::optional<Model> countermodel;
  int world = -1;
};

// Enumerates every monotone valuation pair over f's variables; true iff f is
// positively supported at every world under every one of them.
inline FrameValidity frame_validates(const Frame& fr, Fml f) {
  std::set<std::string> varset = variables(f);
  std::vector<std::string> vars(varset.begin(), varset.end());
  std::vector<uint32_t> upsets = upward_closed_sets(fr.leq);
  size_t k = vars.size();
  // each variable picks a pair (pos, neg) of upsets
  size_t per_var = upsets.size() * upsets.size();
  size_t total = 1;
  for (size_t i = 0; i < k; ++i) {
    total *= per_var;
    if (total > 100000000) throw EvalError("valuation space too large");
  }
  for (size_t idx = 0; idx < total; ++idx) {
    Model m;
    m.frame = fr;
    size_t rest = idx;
    for (size_t i = 0; i < k; ++i) {
      size_t choice = rest % per_var;
      rest /= per_var;
      m.v_pos[vars[i]] = upsets[choice / upsets.size()];
      m.v_neg[vars[i]] = upsets[choice % upsets.size()];
    }
    for (int w = 0; w < fr.n(); ++w) {
      if (!supports(m, w, Polarity::Pos, f)) {
        FrameValidity out;
        out.valid = false;
        out.countermodel = std::move(m);
        out.world = w;
        return out;
      }
    }
  }
  return FrameValidity{};
}

// Persistence (a theorem on well-formed models): support never lost along leq.
inline bool persistence_check(const Model& m, const FmlSet& sample) {
  int n = m.frame.n();
  for (Fml f : sample)
    for (Polarity pol : {Polarity::Pos, Polarity::Neg})
      for (int w = 0; w < n; ++w) {
        if (!supports(m, w, pol, f)) continue;
        for (int w2 = 0; w2 < n; ++w2)
          if (m.frame.leq.has(w, w2) && !supports(m, w2, pol, f)) return false;
      }
  return true;
}

inline Rel reflexive_transitive_closure(const Rel& r) {
  Rel out = r;
  int n = out.n();
  for (int w = 0; w < n; ++w) out.add(w, w);
  for (bool changed = true; changed;) {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (out.has(a, b) && (out.row[b] & ~out.row[a])) {
          out.row[a] |= out.row[b];
          changed = true;
        }
  }
  return out;
}

} // namespace cn4k
