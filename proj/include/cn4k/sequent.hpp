// Sequents, the per-logic rule sets, proof-tree checking, and the
// height-preserving structural operations (general axioms, weakening,
// contraction, left-rule inversion). Antecedents are multisets; every
// comparison here is order-insensitive.
#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formula.hpp"
#include "logic.hpp"

namespace cn4k {

struct Sequent {
  std::vector<Fml> antecedent;
  Fml succedent = nullptr;
};

struct SequentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool same_multiset(const std::vector<Fml>& a, const std::vector<Fml>& b) {
  if (a.size() != b.size()) return false;
  std::vector<uint64_t> x, y;
  x.reserve(a.size());
  y.reserve(b.size());
  for (Fml f : a) x.push_back(f->id);
  for (Fml f : b) y.push_back(f->id);
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

inline bool same_sequent(const Sequent& a, const Sequent& b) {
  return a.succedent == b.succedent && same_multiset(a.antecedent, b.antecedent);
}

inline bool remove_one(std::vector<Fml>& v, Fml f) {
  auto it = std::find(v.begin(), v.end(), f);
  if (it == v.end()) return false;
  v.erase(it);
  return true;
}

inline int count_of(const std::vector<Fml>& v, Fml f) {
  return static_cast<int>(std::count(v.begin(), v.end(), f));
}

inline int index_of(const std::vector<Fml>& v, Fml f) {
  auto it = std::find(v.begin(), v.end(), f);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

// --- text format: "f1, f2 => g" --------------------------------------------

inline Sequent parse_sequent(std::string_view text) {
  size_t arrow = text.find("=>");
  if (arrow == std::string_view::npos) throw ParseError(0, "sequent needs '=>'");
  Sequent s;
  std::string_view left = text.substr(0, arrow);
  auto blank = [](std::string_view sv) {
    return sv.find_first_not_of(" \t") == std::string_view::npos;
  };
  if (!blank(left)) {
    size_t start = 0;
    while (start <= left.size()) {
      size_t comma = left.find(',', start);
      std::string_view part =
          comma == std::string_view::npos ? left.substr(start) : left.substr(start, comma - start);
      s.antecedent.push_back(parse(part));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  s.succedent = parse(text.substr(arrow + 2));
  return s;
}

inline std::string render_sequent(const Sequent& s) {
  std::string out;
  for (size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) out += ", ";
    out += render(s.antecedent[i]);
  }
  if (!s.antecedent.empty()) out += " ";
  out += "=> ";
  out += render(s.succedent);
  return out;
}

// --- rules ------------------------------------------------------------------

enum class RuleId {
  Ax, AxNeg,
  NegNegL, NegNegR,
  AndL, AndR,
  OrL, OrR1, OrR2,
  NegOrL, NegOrR,
  NegAndR1, NegAndR2, NegAndL,
  ImplL, ImplR,
  NegImplL, NegImplR,
  Box, BoxJoin, DiaNeg, DiaJoinNeg,
  Dia, DiaPm, DiaYv, Dia1,
  BoxNeg, BoxPmNeg, BoxYvNeg, Box1Neg,
  DiaJoin, Dia1Join, BoxJoinNeg, Box1JoinNeg,
  Cut,
};

inline const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::Ax: return "ax";
    case RuleId::AxNeg: return "ax_neg";
    case RuleId::NegNegL: return "neg_neg_l";
    case RuleId::NegNegR: return "neg_neg_r";
    case RuleId::AndL: return "and_l";
    case RuleId::AndR: return "and_r";
    case RuleId::OrL: return "or_l";
    case RuleId::OrR1: return "or_r1";
    case RuleId::OrR2: return "or_r2";
    case RuleId::NegOrL: return "neg_or_l";
    case RuleId::NegOrR: return "neg_or_r";
    case RuleId::NegAndR1: return "neg_and_r1";
    case RuleId::NegAndR2: return "neg_and_r2";
    case RuleId::NegAndL: return "neg_and_l";
    case RuleId::ImplL: return "impl_l";
    case RuleId::ImplR: return "impl_r";
    case RuleId::NegImplL: return "neg_impl_l";
    case RuleId::NegImplR: return "neg_impl_r";
    case RuleId::Box: return "box";
    case RuleId::BoxJoin: return "box_join";
    case RuleId::DiaNeg: return "dia_neg";
    case RuleId::DiaJoinNeg: return "dia_join_neg";
    case RuleId::Dia: return "dia";
    case RuleId::DiaPm: return "dia_pm";
    case RuleId::DiaYv: return "dia_yv";
    case RuleId::Dia1: return "dia_1";
    case RuleId::BoxNeg: return "box_neg";
    case RuleId::BoxPmNeg: return "box_pm_neg";
    case RuleId::BoxYvNeg: return "box_yv_neg";
    case RuleId::Box1Neg: return "box_1_neg";
    case RuleId::DiaJoin: return "dia_join";
    case RuleId::Dia1Join: return "dia_1_join";
    case RuleId::BoxJoinNeg: return "box_join_neg";
    case RuleId::Box1JoinNeg: return "box_1_join_neg";
    case RuleId::Cut: return "cut";
  }
  return "?";
}

inline std::optional<RuleId> parse_rule(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(RuleId::Cut); ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (name == rule_name(r)) return r;
  }
  return std::nullopt;
}

// Modal rules, described by: which succedent shape they introduce, what kind
// of antecedent principal they consume, and which projections feed the premise.
struct ModalSpec {
  bool box_succ;     // succedent modality: [] vs <>
  bool succ_neg;     // succedent is ~[]chi / ~<>chi
  int principal;     // 0 none, 1 = <>phi, 2 = ~[]phi
  bool use_box;      // premise includes { phi | []phi in Gamma }
  bool use_dia_neg;  // premise includes { ~phi | ~<>phi in Gamma }
};

inline const ModalSpec* modal_spec(RuleId r) {
  static const ModalSpec box_s{true, false, 0, true, false};
  static const ModalSpec box_join_s{true, false, 0, true, true};
  static const ModalSpec dia_neg_s{false, true, 0, false, true};
  static const ModalSpec dia_join_neg_s{false, true, 0, true, true};
  static const ModalSpec dia_s{false, false, 1, false, false};
  static const ModalSpec dia_pm_s{false, false, 1, true, false};
  static const ModalSpec dia_yv_s{false, false, 1, false, true};
  static const ModalSpec dia_1_s{false, false, 1, true, true};
  static const ModalSpec box_neg_s{true, true, 2, false, false};
  static const ModalSpec box_pm_neg_s{true, true, 2, false, true};
  static const ModalSpec box_yv_neg_s{true, true, 2, true, false};
  static const ModalSpec box_1_neg_s{true, true, 2, true, true};
  static const ModalSpec dia_join_s{false, false, 2, false, false};
  static const ModalSpec dia_1_join_s{false, false, 2, true, true};
  static const ModalSpec box_join_neg_s{true, true, 1, false, false};
  static const ModalSpec box_1_join_neg_s{true, true, 1, true, true};
  switch (r) {
    case RuleId::Box: return &box_s;
    case RuleId::BoxJoin: return &box_join_s;
    case RuleId::DiaNeg: return &dia_neg_s;
    case RuleId::DiaJoinNeg: return &dia_join_neg_s;
    case RuleId::Dia: return &dia_s;
    case RuleId::DiaPm: return &dia_pm_s;
    case RuleId::DiaYv: return &dia_yv_s;
    case RuleId::Dia1: return &dia_1_s;
    case RuleId::BoxNeg: return &box_neg_s;
    case RuleId::BoxPmNeg: return &box_pm_neg_s;
    case RuleId::BoxYvNeg: return &box_yv_neg_s;
    case RuleId::Box1Neg: return &box_1_neg_s;
    case RuleId::DiaJoin: return &dia_join_s;
    case RuleId::Dia1Join: return &dia_1_join_s;
    case RuleId::BoxJoinNeg: return &box_join_neg_s;
    case RuleId::Box1JoinNeg: return &box_1_join_neg_s;
    default: return nullptr;
  }
}

// Left rules consume an antecedent occurrence and need a principal index.
inline bool left_principal_rule(RuleId r) {
  switch (r) {
    case RuleId::NegNegL:
    case RuleId::AndL:
    case RuleId::OrL:
    case RuleId::NegOrL:
    case RuleId::NegAndL:
    case RuleId::ImplL:
    case RuleId::NegImplL:
      return true;
    default: {
      const ModalSpec* ms = modal_spec(r);
      return ms && ms->principal != 0;
    }
  }
}

inline const std::vector<RuleId>& calculus_rules(LogicId l) {
  static const std::vector<RuleId> fig1 = {
      RuleId::Ax, RuleId::AxNeg, RuleId::NegNegL, RuleId::NegNegR,
      RuleId::AndL, RuleId::AndR, RuleId::OrL, RuleId::OrR1, RuleId::OrR2,
      RuleId::NegOrL, RuleId::NegOrR, RuleId::NegAndR1, RuleId::NegAndR2,
      RuleId::NegAndL, RuleId::ImplL, RuleId::ImplR, RuleId::NegImplL, RuleId::NegImplR};
  static const std::vector<std::vector<RuleId>> modal = {
      {RuleId::Box, RuleId::Dia, RuleId::BoxNeg, RuleId::DiaNeg},
      {RuleId::Box, RuleId::DiaPm, RuleId::BoxPmNeg, RuleId::DiaNeg},
      {RuleId::Box, RuleId::DiaYv, RuleId::BoxYvNeg, RuleId::DiaNeg},
      {RuleId::BoxJoin, RuleId::Dia, RuleId::DiaJoin, RuleId::BoxNeg, RuleId::BoxJoinNeg,
       RuleId::DiaJoinNeg},
      {RuleId::BoxJoin, RuleId::Dia1, RuleId::Dia1Join, RuleId::Box1Neg, RuleId::Box1JoinNeg,
       RuleId::DiaJoinNeg}};
  static const std::vector<std::vector<RuleId>> full = [] {
    std::vector<std::vector<RuleId>> all;
    for (const auto& m : modal) {
      std::vector<RuleId> v = fig1;
      v.insert(v.end(), m.begin(), m.end());
      all.push_back(std::move(v));
    }
    return all;
  }();
  return full[static_cast<int>(l)];
}

inline bool rule_in_calculus(RuleId r, LogicId l) {
  const std::vector<RuleId>& rules = calculus_rules(l);
  return std::find(rules.begin(), rules.end(), r) != rules.end();
}

// a's premise context is a sub-multiset of b's for any shared conclusion
// (strict, transitively closed).
inline bool rule_order_weaker(RuleId a, RuleId b) {
  using R = RuleId;
  static const std::vector<std::pair<R, R>> pairs = {
      {R::Box, R::BoxJoin},
      {R::DiaNeg, R::DiaJoinNeg},
      {R::Dia, R::DiaPm}, {R::Dia, R::DiaYv}, {R::Dia, R::Dia1},
      {R::DiaPm, R::Dia1}, {R::DiaYv, R::Dia1},
      {R::BoxNeg, R::BoxPmNeg}, {R::BoxNeg, R::BoxYvNeg}, {R::BoxNeg, R::Box1Neg},
      {R::BoxPmNeg, R::Box1Neg}, {R::BoxYvNeg, R::Box1Neg},
      {R::DiaJoin, R::Dia1Join},
      {R::BoxJoinNeg, R::Box1JoinNeg}};
  for (const auto& [x, y] : pairs)
    if (x == a && y == b) return true;
  return false;
}

inline std::vector<Fml> box_projection(const std::vector<Fml>& ante) {
  std::vector<Fml> out;
  for (Fml f : ante)
    if (f->is(Formula::Kind::Box)) out.push_back(f->l);
  return out;
}

inline std::vector<Fml> dia_neg_projection(const std::vector<Fml>& ante) {
  std::vector<Fml> out;
  for (Fml f : ante)
    if (f->is(Formula::Kind::Neg) && f->l->is(Formula::Kind::Dia)) out.push_back(neg(f->l->l));
  return out;
}

// Premise sequents for applying `r` backward at `s` with the given principal
// (index into the antecedent for left rules, -1 otherwise). nullopt when the
// rule does not fit. Cut is not handled here.
inline std::optional<std::vector<Sequent>> premises_for(const Sequent& s, RuleId r, int principal) {
  using K = Formula::Kind;
  Fml g = s.succedent;
  auto no_principal = [&]() { return principal == -1; };
  auto principal_fml = [&]() -> Fml {
    if (principal < 0 || principal >= static_cast<int>(s.antecedent.size())) return nullptr;
    return s.antecedent[principal];
  };
  // antecedent with the principal occurrence replaced by `parts`
  auto splice = [&](std::initializer_list<Fml> parts) {
    std::vector<Fml> a;
    a.reserve(s.antecedent.size() + parts.size());
    for (int i = 0; i < static_cast<int>(s.antecedent.size()); ++i) {
      if (i == principal) {
        for (Fml p : parts) a.push_back(p);
      } else {
        a.push_back(s.antecedent[i]);
      }
    }
    return a;
  };
  auto one = [](Sequent q) { return std::vector<Sequent>{std::move(q)}; };

  if (const ModalSpec* ms = modal_spec(r)) {
    Fml body = g;
    if (ms->succ_neg) {
      if (!body->is(K::Neg)) return std::nullopt;
      body = body->l;
    }
    if (!body->is(ms->box_succ ? K::Box : K::Dia)) return std::nullopt;
    Fml chi = body->l;
    Sequent prem;
    if (ms->use_box) {
      std::vector<Fml> b = box_projection(s.antecedent);
      prem.antecedent.insert(prem.antecedent.end(), b.begin(), b.end());
    }
    if (ms->use_dia_neg) {
      std::vector<Fml> d = dia_neg_projection(s.antecedent);
      prem.antecedent.insert(prem.antecedent.end(), d.begin(), d.end());
    }
    if (ms->principal == 0) {
      if (!no_principal()) return std::nullopt;
    } else {
      Fml c = principal_fml();
      if (!c) return std::nullopt;
      if (ms->principal == 1) {
        if (!c->is(K::Dia)) return std::nullopt;
        prem.antecedent.push_back(c->l);
      } else {
        if (!(c->is(K::Neg) && c->l->is(K::Box))) return std::nullopt;
        prem.antecedent.push_back(neg(c->l->l));
      }
    }
    prem.succedent = ms->succ_neg ? neg(chi) : chi;
    return one(std::move(prem));
  }

  switch (r) {
    case RuleId::Ax: {
      if (!g->is(K::Var)) return std::nullopt;
      if (count_of(s.antecedent, g) == 0) return std::nullopt;
      if (principal >= 0 && principal_fml() != g) return std::nullopt;
      return std::vector<Sequent>{};
    }
    case RuleId::AxNeg: {
      if (!(g->is(K::Neg) && g->l->is(K::Var))) return std::nullopt;
      if (count_of(s.antecedent, g) == 0) return std::nullopt;
      if (principal >= 0 && principal_fml() != g) return std::nullopt;
      return std::vector<Sequent>{};
    }
    case RuleId::NegNegL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::Neg) || !c->l->is(K::Neg)) return std::nullopt;
      return one({splice({c->l->l}), g});
    }
    case RuleId::NegNegR: {
      if (!no_principal() || !g->is(K::Neg) || !g->l->is(K::Neg)) return std::nullopt;
      return one({s.antecedent, g->l->l});
    }
    case RuleId::AndL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::And)) return std::nullopt;
      return one({splice({c->l, c->r}), g});
    }
    case RuleId::AndR: {
      if (!no_principal() || !g->is(K::And)) return std::nullopt;
      return {{{s.antecedent, g->l}, {s.antecedent, g->r}}};
    }
    case RuleId::OrL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::Or)) return std::nullopt;
      return {{{splice({c->l}), g}, {splice({c->r}), g}}};
    }
    case RuleId::OrR1: {
      if (!no_principal() || !g->is(K::Or)) return std::nullopt;
      return one({s.antecedent, g->l});
    }
    case RuleId::OrR2: {
      if (!no_principal() || !g->is(K::Or)) return std::nullopt;
      return one({s.antecedent, g->r});
    }
    case RuleId::NegOrL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::Neg) || !c->l->is(K::Or)) return std::nullopt;
      return one({splice({neg(c->l->l), neg(c->l->r)}), g});
    }
    case RuleId::NegOrR: {
      if (!no_principal() || !g->is(K::Neg) || !g->l->is(K::Or)) return std::nullopt;
      return {{{s.antecedent, neg(g->l->l)}, {s.antecedent, neg(g->l->r)}}};
    }
    case RuleId::NegAndR1: {
      if (!no_principal() || !g->is(K::Neg) || !g->l->is(K::And)) return std::nullopt;
      return one({s.antecedent, neg(g->l->l)});
    }
    case RuleId::NegAndR2: {
      if (!no_principal() || !g->is(K::Neg) || !g->l->is(K::And)) return std::nullopt;
      return one({s.antecedent, neg(g->l->r)});
    }
    case RuleId::NegAndL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::Neg) || !c->l->is(K::And)) return std::nullopt;
      return {{{splice({neg(c->l->l)}), g}, {splice({neg(c->l->r)}), g}}};
    }
    case RuleId::ImplL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::Impl)) return std::nullopt;
      // principal stays in the left premise; the right premise trades it for
      // the consequent
      return {{{s.antecedent, c->l}, {splice({c->r}), g}}};
    }
    case RuleId::ImplR: {
      if (!no_principal() || !g->is(K::Impl)) return std::nullopt;
      std::vector<Fml> a = s.antecedent;
      a.push_back(g->l);
      return one({std::move(a), g->r});
    }
    case RuleId::NegImplL: {
      Fml c = principal_fml();
      if (!c || !c->is(K::Neg) || !c->l->is(K::Impl)) return std::nullopt;
      return one({splice({c->l->l, neg(c->l->r)}), g});
    }
    case RuleId::NegImplR: {
      if (!no_principal() || !g->is(K::Neg) || !g->l->is(K::Impl)) return std::nullopt;
      return {{{s.antecedent, g->l->l}, {s.antecedent, neg(g->l->r)}}};
    }
    default:
      return std::nullopt;
  }
}

struct RuleInstance {
  RuleId rule;
  int principal;
  std::vector<Sequent> premises;
};

inline std::vector<RuleInstance> backward_instances(const Sequent& s, LogicId logic) {
  std::vector<RuleInstance> out;
  for (RuleId r : calculus_rules(logic)) {
    if (left_principal_rule(r)) {
      for (int i = 0; i < static_cast<int>(s.antecedent.size()); ++i)
        if (auto prem = premises_for(s, r, i)) out.push_back({r, i, std::move(*prem)});
    } else {
      if (auto prem = premises_for(s, r, -1)) out.push_back({r, -1, std::move(*prem)});
    }
  }
  return out;
}

// --- proof trees -------------------------------------------------------------

struct ProofTree {
  Sequent seq;
  RuleId rule = RuleId::Ax;
  int principal = -1;
  std::vector<ProofTree> children;
};

inline int proof_height(const ProofTree& t) {
  int h = 0;
  for (const ProofTree& c : t.children) h = std::max(h, 1 + proof_height(c));
  return h;
}

inline size_t proof_size(const ProofTree& t) {
  size_t n = 1;
  for (const ProofTree& c : t.children) n += proof_size(c);
  return n;
}

struct CheckReport {
  bool ok = true;
  std::string path; // node path like "root.1.0"
  std::string reason;
};

namespace detail {

inline bool check_node(const ProofTree& t, LogicId logic, bool allow_cut, std::string& path,
                       CheckReport& rep) {
  auto fail = [&](const std::string& why) {
    rep = {false, path, why};
    return false;
  };
  if (!t.seq.succedent) return fail("node has no succedent");
  if (t.rule == RuleId::Cut) {
    if (!allow_cut) return fail("cut is not part of this calculus");
    if (t.children.size() != 2) return fail("cut needs exactly two premises");
    const Sequent& l = t.children[0].seq;
    const Sequent& r = t.children[1].seq;
    if (r.succedent != t.seq.succedent)
      return fail("right cut premise must share the conclusion succedent");
    std::vector<Fml> rest = r.antecedent;
    if (!remove_one(rest, l.succedent))
      return fail("cut formula " + render(l.succedent) + " missing from right premise");
    std::vector<Fml> merged = l.antecedent;
    merged.insert(merged.end(), rest.begin(), rest.end());
    if (!same_multiset(merged, t.seq.antecedent))
      return fail("conclusion antecedent is not the merge of the premise contexts");
  } else {
    if (!rule_in_calculus(t.rule, logic))
      return fail(std::string("rule ") + rule_name(t.rule) + " is not in the " +
                  logic_name(logic) + " calculus");
    auto prem = premises_for(t.seq, t.rule, t.principal);
    if (!prem)
      return fail(std::string("rule ") + rule_name(t.rule) + " does not apply to " +
                  render_sequent(t.seq));
    if (prem->size() != t.children.size())
      return fail(std::string("rule ") + rule_name(t.rule) + " expects " +
                  std::to_string(prem->size()) + " premises, found " +
                  std::to_string(t.children.size()));
    for (size_t i = 0; i < prem->size(); ++i) {
      if (!same_sequent((*prem)[i], t.children[i].seq))
        return fail("premise " + std::to_string(i) + " should be " +
                    render_sequent((*prem)[i]) + ", found " +
                    render_sequent(t.children[i].seq));
    }
  }
  for (size_t i = 0; i < t.children.size(); ++i) {
    size_t mark = path.size();
    path += "." + std::to_string(i);
    if (!check_node(t.children[i], logic, allow_cut, path, rep)) return false;
    path.resize(mark);
  }
  return true;
}

} // namespace detail

inline CheckReport check_proof(const ProofTree& t, LogicId logic, bool allow_cut = false) {
  CheckReport rep;
  std::string path = "root";
  detail::check_node(t, logic, allow_cut, path, rep);
  return rep;
}

// --- structural operations ----------------------------------------------

// Per-logic rule choices for introducing each modal shape.
inline RuleId right_box_rule(LogicId l) {
  return (l == LogicId::CN4K_JOIN || l == LogicId::CN4K_ONE) ? RuleId::BoxJoin : RuleId::Box;
}
inline RuleId right_dia_neg_rule(LogicId l) {
  return (l == LogicId::CN4K_JOIN || l == LogicId::CN4K_ONE) ? RuleId::DiaJoinNeg
                                                             : RuleId::DiaNeg;
}
inline RuleId left_dia_rule(LogicId l) {
  switch (l) {
    case LogicId::CN4K_PM: return RuleId::DiaPm;
    case LogicId::CN4K_YV: return RuleId::DiaYv;
    case LogicId::CN4K_ONE: return RuleId::Dia1;
    default: return RuleId::Dia;
  }
}
inline RuleId left_box_neg_rule(LogicId l) {
  switch (l) {
    case LogicId::CN4K_PM: return RuleId::BoxPmNeg;
    case LogicId::CN4K_YV: return RuleId::BoxYvNeg;
    case LogicId::CN4K_ONE: return RuleId::Box1Neg;
    default: return RuleId::BoxNeg;
  }
}

// Cut-free proof of f, context => f, for arbitrary f.
inline ProofTree derive_general_axiom(Fml f, const std::vector<Fml>& context, LogicId logic) {
  using K = Formula::Kind;
  Sequent seq;
  seq.antecedent.reserve(context.size() + 1);
  seq.antecedent.push_back(f);
  seq.antecedent.insert(seq.antecedent.end(), context.begin(), context.end());
  seq.succedent = f;
  auto cons = [&](Fml extra) {
    std::vector<Fml> v;
    v.reserve(context.size() + 1);
    v.push_back(extra);
    v.insert(v.end(), context.begin(), context.end());
    return v;
  };
  auto gax = [&](Fml h, const std::vector<Fml>& ctx) {
    return derive_general_axiom(h, ctx, logic);
  };
  auto modal_ctx = [&](RuleId r) {
    const ModalSpec* ms = modal_spec(r);
    std::vector<Fml> ctx;
    if (ms->use_box) {
      std::vector<Fml> b = box_projection(context);
      ctx.insert(ctx.end(), b.begin(), b.end());
    }
    if (ms->use_dia_neg) {
      std::vector<Fml> d = dia_neg_projection(context);
      ctx.insert(ctx.end(), d.begin(), d.end());
    }
    return ctx;
  };
  switch (f->kind) {
    case K::Var:
      return {seq, RuleId::Ax, 0, {}};
    case K::And: {
      Fml a = f->l, b = f->r;
      ProofTree c1{{seq.antecedent, a}, RuleId::AndL, 0, {gax(a, cons(b))}};
      ProofTree c2{{seq.antecedent, b}, RuleId::AndL, 0, {gax(b, cons(a))}};
      return {seq, RuleId::AndR, -1, {std::move(c1), std::move(c2)}};
    }
    case K::Or: {
      Fml a = f->l, b = f->r;
      ProofTree c1{{cons(a), f}, RuleId::OrR1, -1, {gax(a, context)}};
      ProofTree c2{{cons(b), f}, RuleId::OrR2, -1, {gax(b, context)}};
      return {seq, RuleId::OrL, 0, {std::move(c1), std::move(c2)}};
    }
    case K::Impl: {
      Fml a = f->l, b = f->r;
      std::vector<Fml> pa = seq.antecedent;
      pa.push_back(a);
      std::vector<Fml> ctx_r = context;
      ctx_r.push_back(a);
      ProofTree il{{pa, b}, RuleId::ImplL, 0, {gax(a, cons(f)), gax(b, ctx_r)}};
      return {seq, RuleId::ImplR, -1, {std::move(il)}};
    }
    case K::Box: {
      RuleId r = right_box_rule(logic);
      return {seq, r, -1, {gax(f->l, modal_ctx(r))}};
    }
    case K::Dia: {
      RuleId r = left_dia_rule(logic);
      return {seq, r, 0, {gax(f->l, modal_ctx(r))}};
    }
    case K::Neg: {
      Fml g = f->l;
      switch (g->kind) {
        case K::Var:
          return {seq, RuleId::AxNeg, 0, {}};
        case K::Neg: {
          ProofTree inner{{seq.antecedent, g->l}, RuleId::NegNegL, 0, {gax(g->l, context)}};
          return {seq, RuleId::NegNegR, -1, {std::move(inner)}};
        }
        case K::And: {
          Fml na = neg(g->l), nb = neg(g->r);
          ProofTree c1{{cons(na), f}, RuleId::NegAndR1, -1, {gax(na, context)}};
          ProofTree c2{{cons(nb), f}, RuleId::NegAndR2, -1, {gax(nb, context)}};
          return {seq, RuleId::NegAndL, 0, {std::move(c1), std::move(c2)}};
        }
        case K::Or: {
          Fml na = neg(g->l), nb = neg(g->r);
          ProofTree c1{{seq.antecedent, na}, RuleId::NegOrL, 0, {gax(na, cons(nb))}};
          ProofTree c2{{seq.antecedent, nb}, RuleId::NegOrL, 0, {gax(nb, cons(na))}};
          return {seq, RuleId::NegOrR, -1, {std::move(c1), std::move(c2)}};
        }
        case K::Impl: {
          Fml a = g->l, nb = neg(g->r);
          ProofTree c1{{seq.antecedent, a}, RuleId::NegImplL, 0, {gax(a, cons(nb))}};
          ProofTree c2{{seq.antecedent, nb}, RuleId::NegImplL, 0, {gax(nb, cons(a))}};
          return {seq, RuleId::NegImplR, -1, {std::move(c1), std::move(c2)}};
        }
        case K::Box: {
          RuleId r = left_box_neg_rule(logic);
          return {seq, r, 0, {gax(neg(g->l), modal_ctx(r))}};
        }
        case K::Dia: {
          RuleId r = right_dia_neg_rule(logic);
          return {seq, r, -1, {gax(neg(g->l), modal_ctx(r))}};
        }
      }
      break;
    }
  }
  throw SequentError("unreachable formula shape");
}

// Height-preserving weakening: from a proof of Gamma => psi, a proof of
// f, Gamma => psi in the same calculus.
inline ProofTree weaken(const ProofTree& p, Fml f) {
  using K = Formula::Kind;
  ProofTree out;
  out.seq.antecedent = p.seq.antecedent;
  out.seq.antecedent.push_back(f); // appended, so principal indices survive
  out.seq.succedent = p.seq.succedent;
  out.rule = p.rule;
  out.principal = p.principal;
  if (p.rule == RuleId::Cut) {
    out.children = {p.children[0], weaken(p.children[1], f)};
    return out;
  }
  if (const ModalSpec* ms = modal_spec(p.rule)) {
    ProofTree child = p.children[0];
    if (ms->use_box && f->is(K::Box)) child = weaken(child, f->l);
    else if (ms->use_dia_neg && f->is(K::Neg) && f->l->is(K::Dia))
      child = weaken(child, neg(f->l->l));
    out.children = {std::move(child)};
    return out;
  }
  out.children.reserve(p.children.size());
  for (const ProofTree& c : p.children) out.children.push_back(weaken(c, f));
  return out;
}

inline ProofTree weaken_all(ProofTree p, const std::vector<Fml>& fs) {
  for (Fml f : fs) p = weaken(p, f);
  return p;
}

namespace detail {

struct InversionTarget {
  RuleId rule;
  std::vector<std::vector<Fml>> variants; // replacement parts per premise choice
};

inline std::optional<InversionTarget> inversion_target(Fml f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::And: return InversionTarget{RuleId::AndL, {{f->l, f->r}}};
    case K::Or: return InversionTarget{RuleId::OrL, {{f->l}, {f->r}}};
    case K::Impl: return InversionTarget{RuleId::ImplL, {{f->r}}}; // right premise
    case K::Neg:
      switch (f->l->kind) {
        case K::Neg: return InversionTarget{RuleId::NegNegL, {{f->l->l}}};
        case K::Or:
          return InversionTarget{RuleId::NegOrL, {{neg(f->l->l), neg(f->l->r)}}};
        case K::And:
          return InversionTarget{RuleId::NegAndL, {{neg(f->l->l)}, {neg(f->l->r)}}};
        case K::Impl:
          return InversionTarget{RuleId::NegImplL, {{f->l->l, neg(f->l->r)}}};
        default: return std::nullopt;
      }
    default: return std::nullopt;
  }
}

} // namespace detail

// Height-preserving inversion: from a proof of Gamma, f => psi, a proof with
// the occurrence of f replaced by its premise parts (variant selects the
// branch for or/neg-and, and f => chi right-premise inversion for impl).
inline ProofTree invert_left(const ProofTree& p, Fml f, int variant = 0) {
  using K = Formula::Kind;
  auto tgt = detail::inversion_target(f);
  if (!tgt || variant < 0 || variant >= static_cast<int>(tgt->variants.size()))
    throw SequentError("formula has no left inversion: " + render(f));
  if (p.rule == tgt->rule && p.principal >= 0 && p.seq.antecedent[p.principal] == f)
    return p.children[tgt->rule == RuleId::ImplL ? 1 : variant];
  const std::vector<Fml>& parts = tgt->variants[variant];
  Sequent seq2;
  seq2.antecedent = p.seq.antecedent;
  if (!remove_one(seq2.antecedent, f))
    throw SequentError("inversion target not in antecedent: " + render(f));
  seq2.antecedent.insert(seq2.antecedent.end(), parts.begin(), parts.end());
  seq2.succedent = p.seq.succedent;
  if (p.rule == RuleId::Ax || p.rule == RuleId::AxNeg)
    return {seq2, p.rule, -1, {}};
  if (p.rule == RuleId::Cut) throw SequentError("inversion does not traverse cut");
  if (const ModalSpec* ms = modal_spec(p.rule)) {
    ProofTree child = p.children[0];
    for (Fml part : parts) {
      if (ms->use_box && part->is(K::Box)) child = weaken(child, part->l);
      else if (ms->use_dia_neg && part->is(K::Neg) && part->l->is(K::Dia))
        child = weaken(child, neg(part->l->l));
    }
    int princ = p.principal >= 0
                    ? index_of(seq2.antecedent, p.seq.antecedent[p.principal])
                    : -1;
    return {seq2, p.rule, princ, {std::move(child)}};
  }
  std::vector<ProofTree> kids;
  kids.reserve(p.children.size());
  for (const ProofTree& c : p.children) kids.push_back(invert_left(c, f, variant));
  int princ = -1;
  if (left_principal_rule(p.rule))
    princ = index_of(seq2.antecedent, p.seq.antecedent[p.principal]);
  return {seq2, p.rule, princ, std::move(kids)};
}

// Height-preserving contraction: from a proof of f, f, Gamma => psi, a proof
// of f, Gamma => psi.
inline ProofTree contract(const ProofTree& p, Fml f) {
  using K = Formula::Kind;
  if (count_of(p.seq.antecedent, f) < 2)
    throw SequentError("contraction needs a duplicated occurrence of " + render(f));
  Sequent seq2;
  seq2.antecedent = p.seq.antecedent;
  remove_one(seq2.antecedent, f);
  seq2.succedent = p.seq.succedent;
  if (p.rule == RuleId::Ax || p.rule == RuleId::AxNeg) return {seq2, p.rule, -1, {}};
  if (p.rule == RuleId::Cut) throw SequentError("contraction does not traverse cut");
  if (const ModalSpec* ms = modal_spec(p.rule)) {
    std::optional<Fml> projected;
    if (ms->use_box && f->is(K::Box)) projected = f->l;
    else if (ms->use_dia_neg && f->is(K::Neg) && f->l->is(K::Dia)) projected = neg(f->l->l);
    ProofTree child = projected ? contract(p.children[0], *projected) : p.children[0];
    int princ = p.principal >= 0
                    ? index_of(seq2.antecedent, p.seq.antecedent[p.principal])
                    : -1;
    return {seq2, p.rule, princ, {std::move(child)}};
  }
  if (left_principal_rule(p.rule)) {
    Fml c = p.seq.antecedent[p.principal];
    if (c != f) {
      std::vector<ProofTree> kids;
      for (const ProofTree& ch : p.children) kids.push_back(contract(ch, f));
      return {seq2, p.rule, index_of(seq2.antecedent, c), std::move(kids)};
    }
    // the principal is one of the duplicated occurrences: invert the other
    // copy inside the premises, contract the smaller parts, reapply
    int princ = index_of(seq2.antecedent, f);
    auto tgt = detail::inversion_target(f);
    switch (p.rule) {
      case RuleId::NegNegL:
      case RuleId::AndL:
      case RuleId::NegOrL:
      case RuleId::NegImplL: {
        ProofTree t = invert_left(p.children[0], f, 0);
        for (Fml part : tgt->variants[0]) t = contract(t, part);
        return {seq2, p.rule, princ, {std::move(t)}};
      }
      case RuleId::OrL:
      case RuleId::NegAndL: {
        ProofTree t0 = contract(invert_left(p.children[0], f, 0), tgt->variants[0][0]);
        ProofTree t1 = contract(invert_left(p.children[1], f, 1), tgt->variants[1][0]);
        return {seq2, p.rule, princ, {std::move(t0), std::move(t1)}};
      }
      case RuleId::ImplL: {
        ProofTree lhs = contract(p.children[0], f);
        ProofTree rhs = contract(invert_left(p.children[1], f, 0), f->r);
        return {seq2, p.rule, princ, {std::move(lhs), std::move(rhs)}};
      }
      default:
        throw SequentError("unreachable contraction case");
    }
  }
  std::vector<ProofTree> kids;
  for (const ProofTree& ch : p.children) kids.push_back(contract(ch, f));
  return {seq2, p.rule, -1, std::move(kids)};
}

} // namespace cn4k
