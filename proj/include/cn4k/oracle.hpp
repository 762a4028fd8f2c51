#pragma once
// Brute-force reference layer: a second, independently written recursive
// evaluator, a bounded countermodel search over small frames, and a
// deterministic formula corpus for differential testing.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <cn4k/formula.hpp>
#include <cn4k/logic.hpp>
#include <cn4k/semantics.hpp>

namespace cn4k {

struct SearchBounds {
  int max_worlds = 3;
  // Cap on evaluated (frame, valuation) structures. Unset means exhaustive;
  // the full space is astronomical past two worlds when a formula touches
  // several accessibility relations, so bulk runs should set this.
  std::optional<uint64_t> max_candidates;
};

struct Countermodel {
  Model model;
  int world = 0;
};

// Recursive evaluator written directly from the support clauses. It must
// agree with supports() everywhere; the duplication is the point.
inline bool reference_supports(const Model& m, int w, Polarity pol, Fml f) {
  int n = m.frame.n();
  if (w < 0 || w >= n) throw EvalError("world index out of range");
  auto successors = [n](const Rel& r, int a) {
    std::vector<int> out;
    for (int b = 0; b < n; ++b)
      if (r.has(a, b)) out.push_back(b);
    return out;
  };
  std::vector<int> up = successors(m.frame.leq, w);
  bool pos = pol == Polarity::Pos;
  switch (f->kind) {
    case Formula::Kind::Var: {
      if (!m.declares(f->name)) throw EvalError("variable '" + f->name + "' not declared by model");
      uint32_t mask = pos ? m.pos_of(f->name) : m.neg_of(f->name);
      return (mask >> w) & 1u;
    }
    case Formula::Kind::Neg:
      return reference_supports(m, w, flip(pol), f->l);
    case Formula::Kind::And:
      if (pos)
        return reference_supports(m, w, pol, f->l) && reference_supports(m, w, pol, f->r);
      return reference_supports(m, w, pol, f->l) || reference_supports(m, w, pol, f->r);
    case Formula::Kind::Or:
      if (pos)
        return reference_supports(m, w, pol, f->l) || reference_supports(m, w, pol, f->r);
      return reference_supports(m, w, pol, f->l) && reference_supports(m, w, pol, f->r);
    case Formula::Kind::Impl:
      if (pos)
        return std::all_of(up.begin(), up.end(), [&](int v) {
          return !reference_supports(m, v, Polarity::Pos, f->l) ||
                 reference_supports(m, v, Polarity::Pos, f->r);
        });
      return reference_supports(m, w, Polarity::Pos, f->l) &&
             reference_supports(m, w, Polarity::Neg, f->r);
    case Formula::Kind::Box:
      if (pos)
        return std::all_of(up.begin(), up.end(), [&](int v) {
          auto out = successors(m.frame.r_box_pos, v);
          return std::all_of(out.begin(), out.end(), [&](int u) {
            return reference_supports(m, u, Polarity::Pos, f->l);
          });
        });
      return std::all_of(up.begin(), up.end(), [&](int v) {
        auto out = successors(m.frame.r_box_neg, v);
        return std::any_of(out.begin(), out.end(), [&](int u) {
          return reference_supports(m, u, Polarity::Neg, f->l);
        });
      });
    case Formula::Kind::Dia:
      if (pos)
        return std::all_of(up.begin(), up.end(), [&](int v) {
          auto out = successors(m.frame.r_dia_pos, v);
          return std::any_of(out.begin(), out.end(), [&](int u) {
            return reference_supports(m, u, Polarity::Pos, f->l);
          });
        });
      return std::all_of(up.begin(), up.end(), [&](int v) {
        auto out = successors(m.frame.r_dia_neg, v);
        return std::all_of(out.begin(), out.end(), [&](int u) {
          return reference_supports(m, u, Polarity::Neg, f->l);
        });
      });
  }
  throw EvalError("unreachable formula kind");
}

namespace detail {

// Accessibility slots: 0 = r_box_pos, 1 = r_box_neg, 2 = r_dia_pos, 3 = r_dia_neg.
inline void collect_used_slots(Fml f, Polarity pol, std::array<bool, 4>& used) {
  switch (f->kind) {
    case Formula::Kind::Var:
      return;
    case Formula::Kind::Neg:
      collect_used_slots(f->l, flip(pol), used);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_used_slots(f->l, pol, used);
      collect_used_slots(f->r, pol, used);
      return;
    case Formula::Kind::Impl:
      // Both support clauses look at the antecedent positively.
      collect_used_slots(f->l, Polarity::Pos, used);
      collect_used_slots(f->r, pol, used);
      return;
    case Formula::Kind::Box:
      used[pol == Polarity::Pos ? 0 : 1] = true;
      collect_used_slots(f->l, pol, used);
      return;
    case Formula::Kind::Dia:
      used[pol == Polarity::Pos ? 2 : 3] = true;
      collect_used_slots(f->l, pol, used);
      return;
  }
}

// Slots forced equal by a frame class share a group id.
inline std::array<int, 4> slot_groups(FrameClass cls) {
  switch (cls) {
    case FrameClass::General: return {0, 1, 2, 3};
    case FrameClass::PM: return {0, 1, 0, 1};
    case FrameClass::YV: return {0, 0, 2, 2};
    case FrameClass::Join: return {0, 2, 2, 0};
    case FrameClass::Mono: return {0, 0, 0, 0};
  }
  return {0, 1, 2, 3};
}

inline uint64_t rel_code(const Rel& r) {
  uint64_t code = 0;
  int n = r.n();
  for (int a = 0; a < n; ++a)
    code |= static_cast<uint64_t>(r.row[a] & ((1u << n) - 1)) << (a * n);
  return code;
}

inline Rel permute_rel(const Rel& r, const std::vector<int>& perm) {
  int n = r.n();
  Rel out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (r.has(a, b)) out.add(perm[a], perm[b]);
  return out;
}

// All preorders on n worlds, one representative per relabeling class.
inline const std::vector<Rel>& canonical_preorders(int n) {
  static std::map<int, std::vector<Rel>> cache;
  auto hit = cache.find(n);
  if (hit != cache.end()) return hit->second;
  if (n < 1 || n > 4) throw EvalError("frame enumeration is desk-scale; need 1..4 worlds");

  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::pair<int, int>> off;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) off.emplace_back(a, b);

  std::vector<Rel> out;
  for (uint32_t bits = 0; bits < (1u << off.size()); ++bits) {
    Rel r(n);
    for (int w = 0; w < n; ++w) r.add(w, w);
    for (size_t i = 0; i < off.size(); ++i)
      if ((bits >> i) & 1u) r.add(off[i].first, off[i].second);
    bool transitive = true;
    for (int a = 0; a < n && transitive; ++a)
      for (int b = 0; b < n && transitive; ++b)
        if (r.has(a, b))
          for (int c = 0; c < n; ++c)
            if (r.has(b, c) && !r.has(a, c)) {
              transitive = false;
              break;
            }
    if (!transitive) continue;
    uint64_t own = rel_code(r);
    bool minimal = true;
    for (const auto& p : perms)
      if (rel_code(permute_rel(r, p)) < own) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(r);
  }
  return cache.emplace(n, std::move(out)).first->second;
}

// Formula DAG linearized children-first, for allocation-free re-evaluation.
struct EvalPlan {
  std::vector<Fml> nodes;
  std::vector<int> li, ri;   // child indices, -1 when absent
  std::vector<int> vslot;    // Var nodes: index into vars
  std::vector<std::string> vars;
  int root = -1;
};

inline EvalPlan build_plan(Fml f) {
  EvalPlan plan;
  auto vs = variables(f);
  plan.vars.assign(vs.begin(), vs.end());
  std::map<const Formula*, int> seen;
  std::function<int(Fml)> go = [&](Fml g) -> int {
    auto it = seen.find(g);
    if (it != seen.end()) return it->second;
    int l = g->l ? go(g->l) : -1;
    int r = g->r ? go(g->r) : -1;
    int idx = static_cast<int>(plan.nodes.size());
    plan.nodes.push_back(g);
    plan.li.push_back(l);
    plan.ri.push_back(r);
    int slot = -1;
    if (g->kind == Formula::Kind::Var) {
      auto v = std::find(plan.vars.begin(), plan.vars.end(), g->name);
      slot = static_cast<int>(v - plan.vars.begin());
    }
    plan.vslot.push_back(slot);
    seen.emplace(g, idx);
    return idx;
  };
  plan.root = go(f);
  return plan;
}

struct BitFrame {
  int n = 0;
  uint32_t full = 0;
  std::array<uint32_t, 8> up{};               // up[w] = leq-successor mask (contains w)
  std::array<std::array<uint32_t, 8>, 4> rel{}; // rel[slot][w] = successor mask
};

inline BitFrame bit_frame_of(const Frame& fr) {
  if (fr.n() > 8) throw EvalError("bit evaluator capped at 8 worlds");
  BitFrame bf;
  bf.n = fr.n();
  bf.full = (1u << bf.n) - 1;
  for (int w = 0; w < bf.n; ++w) {
    bf.up[w] = fr.leq.row[w];
    bf.rel[0][w] = fr.r_box_pos.row[w];
    bf.rel[1][w] = fr.r_box_neg.row[w];
    bf.rel[2][w] = fr.r_dia_pos.row[w];
    bf.rel[3][w] = fr.r_dia_neg.row[w];
  }
  return bf;
}

// Fills pos/neg with per-node world masks, children already computed.
inline void eval_plan(const EvalPlan& plan, const BitFrame& bf,
                      const std::vector<uint32_t>& vpos, const std::vector<uint32_t>& vneg,
                      std::vector<uint32_t>& pos, std::vector<uint32_t>& neg) {
  size_t count = plan.nodes.size();
  pos.resize(count);
  neg.resize(count);
  for (size_t i = 0; i < count; ++i) {
    Fml g = plan.nodes[i];
    int l = plan.li[i], r = plan.ri[i];
    switch (g->kind) {
      case Formula::Kind::Var:
        pos[i] = vpos[plan.vslot[i]];
        neg[i] = vneg[plan.vslot[i]];
        break;
      case Formula::Kind::Neg:
        pos[i] = neg[l];
        neg[i] = pos[l];
        break;
      case Formula::Kind::And:
        pos[i] = pos[l] & pos[r];
        neg[i] = neg[l] | neg[r];
        break;
      case Formula::Kind::Or:
        pos[i] = pos[l] | pos[r];
        neg[i] = neg[l] & neg[r];
        break;
      case Formula::Kind::Impl: {
        uint32_t bad = pos[l] & ~pos[r];
        uint32_t out = 0;
        for (int w = 0; w < bf.n; ++w)
          if (!(bf.up[w] & bad)) out |= 1u << w;
        pos[i] = out;
        neg[i] = pos[l] & neg[r];
        break;
      }
      case Formula::Kind::Box: {
        uint32_t all_pos = 0, some_neg = 0;
        for (int v = 0; v < bf.n; ++v) {
          if (!(bf.rel[0][v] & ~pos[l])) all_pos |= 1u << v;
          if (bf.rel[1][v] & neg[l]) some_neg |= 1u << v;
        }
        uint32_t rp = 0, rn = 0;
        for (int w = 0; w < bf.n; ++w) {
          if (!(bf.up[w] & ~all_pos)) rp |= 1u << w;
          if (!(bf.up[w] & ~some_neg)) rn |= 1u << w;
        }
        pos[i] = rp;
        neg[i] = rn;
        break;
      }
      case Formula::Kind::Dia: {
        uint32_t some_pos = 0, all_neg = 0;
        for (int v = 0; v < bf.n; ++v) {
          if (bf.rel[2][v] & pos[l]) some_pos |= 1u << v;
          if (!(bf.rel[3][v] & ~neg[l])) all_neg |= 1u << v;
        }
        uint32_t rp = 0, rn = 0;
        for (int w = 0; w < bf.n; ++w) {
          if (!(bf.up[w] & ~some_pos)) rp |= 1u << w;
          if (!(bf.up[w] & ~all_neg)) rn |= 1u << w;
        }
        pos[i] = rp;
        neg[i] = rn;
        break;
      }
    }
  }
}

inline Model materialize(const BitFrame& bf, const Rel& leq,
                         const std::vector<std::string>& vars,
                         const std::vector<uint32_t>& vpos,
                         const std::vector<uint32_t>& vneg) {
  Model m;
  for (int w = 0; w < bf.n; ++w) m.frame.world_names.push_back("w" + std::to_string(w));
  m.frame.leq = leq;
  auto rel_of = [&](int slot) {
    Rel r(bf.n);
    for (int w = 0; w < bf.n; ++w) r.row[w] = bf.rel[slot][w];
    return r;
  };
  m.frame.r_box_pos = rel_of(0);
  m.frame.r_box_neg = rel_of(1);
  m.frame.r_dia_pos = rel_of(2);
  m.frame.r_dia_neg = rel_of(3);
  for (size_t i = 0; i < vars.size(); ++i) {
    m.v_pos[vars[i]] = vpos[i];
    m.v_neg[vars[i]] = vneg[i];
  }
  return m;
}

} // namespace detail

// Ascending enumeration: world count, canonical preorder, relations for the
// slot groups the formula actually uses (class-tied, unused groups empty),
// monotone valuation pairs. First structure refuting f positively wins.
inline std::optional<Countermodel> find_countermodel(Fml f, FrameClass cls, SearchBounds b = {}) {
  if (b.max_worlds < 1) throw EvalError("max_worlds must be at least 1");
  if (b.max_worlds > 4) throw EvalError("frame enumeration is desk-scale; need 1..4 worlds");

  std::array<bool, 4> used{};
  detail::collect_used_slots(f, Polarity::Pos, used);
  std::array<int, 4> groups = detail::slot_groups(cls);
  std::vector<int> active;
  for (int s = 0; s < 4; ++s)
    if (used[s] && std::find(active.begin(), active.end(), groups[s]) == active.end())
      active.push_back(groups[s]);
  std::sort(active.begin(), active.end());

  detail::EvalPlan plan = detail::build_plan(f);
  size_t nvars = plan.vars.size();

  uint64_t seen = 0;
  std::vector<uint32_t> pos, neg;
  std::vector<uint32_t> vpos(nvars), vneg(nvars);

  for (int n = 1; n <= b.max_worlds; ++n) {
    uint32_t full = (1u << n) - 1;
    uint64_t rel_space = 1ull << (n * n);
    for (const Rel& leq : detail::canonical_preorders(n)) {
      std::vector<uint32_t> upsets = upward_closed_sets(leq);
      detail::BitFrame bf;
      bf.n = n;
      bf.full = full;
      for (int w = 0; w < n; ++w) bf.up[w] = leq.row[w];

      std::vector<uint64_t> ridx(active.size(), 0);
      bool rels_done = false;
      while (!rels_done) {
        for (int s = 0; s < 4; ++s) {
          // class-tied siblings of a used slot must carry the same relation,
          // or the materialized frame would leave its class
          uint64_t code = 0;
          auto it = std::find(active.begin(), active.end(), groups[s]);
          if (it != active.end()) code = ridx[it - active.begin()];
          for (int w = 0; w < n; ++w) bf.rel[s][w] = static_cast<uint32_t>((code >> (w * n)) & full);
        }

        std::vector<size_t> vidx(2 * nvars, 0);
        bool vals_done = false;
        while (!vals_done) {
          if (b.max_candidates && seen >= *b.max_candidates) return std::nullopt;
          ++seen;
          for (size_t i = 0; i < nvars; ++i) {
            vpos[i] = upsets[vidx[2 * i]];
            vneg[i] = upsets[vidx[2 * i + 1]];
          }
          detail::eval_plan(plan, bf, vpos, vneg, pos, neg);
          uint32_t missing = ~pos[plan.root] & full;
          if (missing) {
            int w = std::countr_zero(missing);
            Model m = detail::materialize(bf, leq, plan.vars, vpos, vneg);
            if (supports(m, w, Polarity::Pos, f))
              throw EvalError("evaluator disagreement during countermodel search");
            return Countermodel{std::move(m), w};
          }
          vals_done = true;
          for (size_t d = 0; d < vidx.size(); ++d) {
            if (++vidx[d] < upsets.size()) {
              vals_done = false;
              break;
            }
            vidx[d] = 0;
          }
        }

        rels_done = true;
        for (size_t d = 0; d < ridx.size(); ++d) {
          if (++ridx[d] < rel_space) {
            rels_done = false;
            break;
          }
          ridx[d] = 0;
        }
      }
    }
  }
  return std::nullopt;
}

struct CorpusProfile {
  int max_size = 6; // connective budget per formula
  int var_count = 2;
  int count = 100;
};

// Same seed, same corpus; members fit the connective budget.
inline std::vector<Fml> corpus_generate(uint64_t seed, const CorpusProfile& profile) {
  if (profile.var_count < 1) throw EvalError("corpus needs at least one variable");
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  for (int i = 0; i < profile.var_count; ++i) {
    if (i < 4)
      names.push_back(std::string(1, "pqrs"[i]));
    else
      names.push_back("v" + std::to_string(i));
  }
  std::function<Fml(int)> build = [&](int budget) -> Fml {
    if (budget <= 0 || rng() % 4 == 0) return var(names[rng() % names.size()]);
    switch (rng() % 6) {
      case 0: return neg(build(budget - 1));
      case 1: {
        int lb = static_cast<int>(rng() % static_cast<uint64_t>(budget));
        return conj(build(lb), build(budget - 1 - lb));
      }
      case 2: {
        int lb = static_cast<int>(rng() % static_cast<uint64_t>(budget));
        return disj(build(lb), build(budget - 1 - lb));
      }
      case 3: {
        int lb = static_cast<int>(rng() % static_cast<uint64_t>(budget));
        return impl(build(lb), build(budget - 1 - lb));
      }
      case 4: return box(build(budget - 1));
      default: return dia(build(budget - 1));
    }
  };
  std::vector<Fml> out;
  out.reserve(profile.count);
  for (int i = 0; i < profile.count; ++i) out.push_back(build(profile.max_size));
  return out;
}

} // namespace cn4k
