// Backward proof search over the cut-free calculi. Goals are antecedent SETS
// (sorted by intern id); found proofs are rebuilt into multiset trees by
// weakening, so every result passes check_proof for the same logic.
#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sequent.hpp"

namespace cn4k {

enum class Verdict { Proved, NotProvable, BudgetExceeded };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::NotProvable: return "NotProvable";
    case Verdict::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct ProveOptions {
  uint64_t budget = 0; // max visited goals, 0 = unlimited
  bool use_cache = true;
};

struct ProveStats {
  uint64_t nodes = 0;
  uint64_t cache_hits = 0;
  int max_depth = 0;
};

struct DecideResult {
  Verdict verdict = Verdict::NotProvable;
  std::optional<ProofTree> proof;
  ProveStats stats;
};

namespace detail {

// canonical set form plus the duplicates that were removed
inline std::pair<std::vector<Fml>, std::vector<Fml>> dedup_ante(std::vector<Fml> v) {
  std::sort(v.begin(), v.end(), FmlIdLess{});
  std::vector<Fml> set, dups;
  for (Fml f : v) {
    if (set.empty() || set.back() != f) set.push_back(f);
    else dups.push_back(f);
  }
  return {std::move(set), std::move(dups)};
}

struct GoalKey {
  std::vector<uint64_t> ante;
  uint64_t succ = 0;
  bool operator==(const GoalKey&) const = default;
};

struct GoalKeyHash {
  size_t operator()(const GoalKey& k) const {
    size_t h = std::hash<uint64_t>{}(k.succ);
    for (uint64_t x : k.ante) h = h * 1000003ull ^ std::hash<uint64_t>{}(x);
    return h;
  }
};

class Prover {
public:
  enum class St { Proved, Failed, Budget };
  struct Outcome {
    St st = St::Failed;
    bool tainted = false; // failure may be an artifact of loop pruning
    std::optional<ProofTree> tree;
  };

  Prover(LogicId logic, ProveOptions opt) : logic_(logic), opt_(opt) {}

  ProveStats stats;

  Outcome prove(const std::vector<Fml>& ante, Fml succ, int depth) {
    if (depth > stats.max_depth) stats.max_depth = depth;
    GoalKey key = make_key(ante, succ);
    if (opt_.use_cache) {
      auto hit = proved_.find(key);
      if (hit != proved_.end()) {
        ++stats.cache_hits;
        return {St::Proved, false, hit->second};
      }
      if (failed_.count(key)) {
        ++stats.cache_hits;
        return {St::Failed, false, std::nullopt};
      }
    }
    if (history_.count(key)) return {St::Failed, true, std::nullopt};
    ++stats.nodes;
    if (opt_.budget && stats.nodes > opt_.budget) return {St::Budget, false, std::nullopt};

    if (count_of(ante, succ) > 0) {
      std::vector<Fml> ctx = ante;
      remove_one(ctx, succ);
      ProofTree t = derive_general_axiom(succ, ctx, logic_);
      remember_proved(key, t);
      return {St::Proved, false, std::move(t)};
    }

    Sequent s{ante, succ};
    history_.insert(key);
    Outcome out = expand(s, depth);
    history_.erase(key);
    if (out.st == St::Proved) remember_proved(key, *out.tree);
    else if (out.st == St::Failed && !out.tainted && opt_.use_cache) failed_.insert(key);
    return out;
  }

private:
  LogicId logic_;
  ProveOptions opt_;
  std::unordered_map<GoalKey, ProofTree, GoalKeyHash> proved_;
  std::unordered_set<GoalKey, GoalKeyHash> failed_;
  std::unordered_set<GoalKey, GoalKeyHash> history_;

  static GoalKey make_key(const std::vector<Fml>& ante, Fml succ) {
    GoalKey k;
    k.ante.reserve(ante.size());
    for (Fml f : ante) k.ante.push_back(f->id);
    k.succ = succ->id;
    return k;
  }

  void remember_proved(const GoalKey& key, const ProofTree& t) {
    if (opt_.use_cache) proved_.emplace(key, t);
  }

  Outcome expand(const Sequent& s, int depth) {
    // Invertible rules commit: an untainted failure refutes the goal.
    if (auto inst = first_invertible(s)) {
      Outcome out = attempt(s, *inst, depth);
      if (out.st != St::Failed || !out.tainted) return out;
      // the failure leaned on a loop prune; fall back to full search
    }
    bool tainted = false;
    for (const RuleInstance& inst : all_instances(s)) {
      Outcome out = attempt(s, inst, depth);
      if (out.st == St::Proved || out.st == St::Budget) return out;
      tainted |= out.tainted;
    }
    return {St::Failed, tainted, std::nullopt};
  }

  Outcome attempt(const Sequent& s, const RuleInstance& inst, int depth) {
    std::vector<ProofTree> kids;
    kids.reserve(inst.premises.size());
    for (const Sequent& prem : inst.premises) {
      auto [set_ante, dups] = dedup_ante(prem.antecedent);
      Outcome out = prove(set_ante, prem.succedent, depth + 1);
      if (out.st != St::Proved) return {out.st, out.tainted, std::nullopt};
      kids.push_back(weaken_all(std::move(*out.tree), dups));
    }
    ProofTree node{s, inst.rule, inst.principal, std::move(kids)};
    return {St::Proved, false, std::move(node)};
  }

  std::optional<RuleInstance> first_left(const Sequent& s, RuleId r) const {
    for (int i = 0; i < static_cast<int>(s.antecedent.size()); ++i)
      if (auto prem = premises_for(s, r, i)) return RuleInstance{r, i, std::move(*prem)};
    return std::nullopt;
  }

  std::optional<RuleInstance> right(const Sequent& s, RuleId r) const {
    if (auto prem = premises_for(s, r, -1)) return RuleInstance{r, -1, std::move(*prem)};
    return std::nullopt;
  }

  std::optional<RuleInstance> first_invertible(const Sequent& s) const {
    static const RuleId left_first[] = {RuleId::NegNegL, RuleId::AndL, RuleId::NegOrL,
                                        RuleId::NegImplL};
    for (RuleId r : left_first)
      if (auto inst = first_left(s, r)) return inst;
    if (auto inst = right(s, RuleId::ImplR)) return inst;
    if (auto inst = right(s, RuleId::NegNegR)) return inst;
    if (auto inst = first_left(s, RuleId::OrL)) return inst;
    if (auto inst = first_left(s, RuleId::NegAndL)) return inst;
    if (auto inst = right(s, RuleId::AndR)) return inst;
    if (auto inst = right(s, RuleId::NegOrR)) return inst;
    if (auto inst = right(s, RuleId::NegImplR)) return inst;
    return std::nullopt;
  }

  std::vector<RuleInstance> all_instances(const Sequent& s) const {
    std::vector<RuleInstance> out;
    auto push_left = [&](RuleId r) {
      for (int i = 0; i < static_cast<int>(s.antecedent.size()); ++i)
        if (auto prem = premises_for(s, r, i)) out.push_back({r, i, std::move(*prem)});
    };
    auto push_right = [&](RuleId r) {
      if (auto prem = premises_for(s, r, -1)) out.push_back({r, -1, std::move(*prem)});
    };
    push_left(RuleId::NegNegL);
    push_left(RuleId::AndL);
    push_left(RuleId::NegOrL);
    push_left(RuleId::NegImplL);
    push_right(RuleId::ImplR);
    push_right(RuleId::NegNegR);
    push_left(RuleId::OrL);
    push_left(RuleId::NegAndL);
    push_right(RuleId::AndR);
    push_right(RuleId::NegOrR);
    push_right(RuleId::NegImplR);
    push_right(RuleId::OrR1);
    push_right(RuleId::OrR2);
    push_right(RuleId::NegAndR1);
    push_right(RuleId::NegAndR2);
    for (RuleId r : calculus_rules(logic_)) {
      const ModalSpec* ms = modal_spec(r);
      if (!ms) continue;
      if (ms->principal == 0) push_right(r);
      else push_left_all(s, r, out);
    }
    push_left(RuleId::ImplL);
    return out;
  }

  static void push_left_all(const Sequent& s, RuleId r, std::vector<RuleInstance>& out) {
    for (int i = 0; i < static_cast<int>(s.antecedent.size()); ++i)
      if (auto prem = premises_for(s, r, i)) out.push_back({r, i, std::move(*prem)});
  }
};

} // namespace detail

inline DecideResult decide(const Sequent& s, LogicId logic, ProveOptions opt = {}) {
  detail::Prover prover(logic, opt);
  auto [set_ante, dups] = detail::dedup_ante(s.antecedent);
  detail::Prover::Outcome out = prover.prove(set_ante, s.succedent, 0);
  DecideResult r;
  r.stats = prover.stats;
  switch (out.st) {
    case detail::Prover::St::Proved:
      r.verdict = Verdict::Proved;
      r.proof = weaken_all(std::move(*out.tree), dups);
      break;
    case detail::Prover::St::Failed:
      r.verdict = Verdict::NotProvable;
      break;
    case detail::Prover::St::Budget:
      r.verdict = Verdict::BudgetExceeded;
      break;
  }
  return r;
}

inline DecideResult decide_formula(Fml f, LogicId logic, ProveOptions opt = {}) {
  return decide(Sequent{{}, f}, logic, opt);
}

// --- admissibility and property harnesses ---------------------------------

struct HarnessReport {
  bool ok = true;
  std::string detail;
  std::optional<ProofTree> proof;
};

// Checks a certificate that may use cut, then re-proves its end sequent
// cut-free and verifies the replacement.
inline HarnessReport cut_admissibility_harness(const ProofTree& t, LogicId logic,
                                               ProveOptions opt = {}) {
  CheckReport with_cut = check_proof(t, logic, true);
  if (!with_cut.ok)
    return {false, "input certificate invalid at " + with_cut.path + ": " + with_cut.reason,
            std::nullopt};
  DecideResult r = decide(t.seq, logic, opt);
  if (r.verdict != Verdict::Proved)
    return {false, std::string("cut-free search returned ") + verdict_name(r.verdict),
            std::nullopt};
  CheckReport cut_free = check_proof(*r.proof, logic, false);
  if (!cut_free.ok)
    return {false, "replacement proof invalid at " + cut_free.path + ": " + cut_free.reason,
            std::nullopt};
  return {true, "", std::move(r.proof)};
}

// For a provable disjunction with empty antecedent, one disjunct must be
// provable on its own.
inline HarnessReport disjunction_property_check(Fml f, LogicId logic, ProveOptions opt = {}) {
  if (!f->is(Formula::Kind::Or)) return {false, "not a disjunction: " + render(f), std::nullopt};
  DecideResult whole = decide_formula(f, logic, opt);
  if (whole.verdict != Verdict::Proved)
    return {true, "disjunction itself is " + std::string(verdict_name(whole.verdict)),
            std::nullopt};
  DecideResult l = decide_formula(f->l, logic, opt);
  if (l.verdict == Verdict::Proved) return {true, "left disjunct provable", std::move(l.proof)};
  DecideResult r = decide_formula(f->r, logic, opt);
  if (r.verdict == Verdict::Proved) return {true, "right disjunct provable", std::move(r.proof)};
  return {false, "provable disjunction with no provable disjunct: " + render(f), std::nullopt};
}

// For a provable ~(a & b) with empty antecedent, one negated conjunct must be
// provable on its own.
inline HarnessReport constructive_falsity_check(Fml f, LogicId logic, ProveOptions opt = {}) {
  if (!(f->is(Formula::Kind::Neg) && f->l->is(Formula::Kind::And)))
    return {false, "not a negated conjunction: " + render(f), std::nullopt};
  DecideResult whole = decide_formula(f, logic, opt);
  if (whole.verdict != Verdict::Proved)
    return {true, "formula itself is " + std::string(verdict_name(whole.verdict)), std::nullopt};
  DecideResult l = decide_formula(neg(f->l->l), logic, opt);
  if (l.verdict == Verdict::Proved) return {true, "left conjunct refutable", std::move(l.proof)};
  DecideResult r = decide_formula(neg(f->l->r), logic, opt);
  if (r.verdict == Verdict::Proved) return {true, "right conjunct refutable", std::move(r.proof)};
  return {false, "provable negated conjunction with no refutable conjunct: " + render(f),
          std::nullopt};
}

} // namespace cn4k
