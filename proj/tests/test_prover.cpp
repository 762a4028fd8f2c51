#include <catch2/catch_amalgamated.hpp>

#include <map>

#include <cn4k/hilbert.hpp>
#include <cn4k/prover.hpp>

#include "support/random_formulas.hpp"

using namespace cn4k;
using namespace cn4k::testsupport;

namespace {

Fml instantiate(Fml pat, const std::map<std::string, Fml>& m) {
  using K = Formula::Kind;
  switch (pat->kind) {
    case K::Var: {
      auto it = m.find(pat->name);
      return it != m.end() ? it->second : pat;
    }
    case K::Neg: return neg(instantiate(pat->l, m));
    case K::And: return conj(instantiate(pat->l, m), instantiate(pat->r, m));
    case K::Or: return disj(instantiate(pat->l, m), instantiate(pat->r, m));
    case K::Impl: return impl(instantiate(pat->l, m), instantiate(pat->r, m));
    case K::Box: return box(instantiate(pat->l, m));
    case K::Dia: return dia(instantiate(pat->l, m));
  }
  return pat;
}

void require_proved(Fml f, LogicId l) {
  DecideResult r = decide_formula(f, l);
  INFO(render(f) << " under " << logic_name(l) << ": " << verdict_name(r.verdict));
  REQUIRE(r.verdict == Verdict::Proved);
  REQUIRE(r.proof);
  CheckReport chk = check_proof(*r.proof, l);
  INFO(chk.path << ": " << chk.reason);
  REQUIRE(chk.ok);
  CHECK(same_sequent(r.proof->seq, Sequent{{}, f}));
}

void require_not_provable(Fml f, LogicId l) {
  DecideResult r = decide_formula(f, l);
  INFO(render(f) << " under " << logic_name(l) << ": " << verdict_name(r.verdict));
  REQUIRE(r.verdict == Verdict::NotProvable);
}

} // namespace

TEST_CASE("every axiom scheme is provable where it belongs") {
  std::map<std::string, Fml> m = {
      {"phi", var("p")}, {"chi", var("q")}, {"psi", var("r")}};
  for (const AxiomScheme& s : axiom_schemes()) {
    Fml f = instantiate(s.pattern, m);
    for (LogicId l : all_logics)
      if (scheme_in_logic(s, l)) require_proved(f, l);
  }
}

TEST_CASE("interaction schemes are refused outside their logics") {
  Fml p = var("p"), q = var("q");
  Fml join_lr = impl(box(p), neg(dia(neg(p))));
  Fml join_rl = impl(neg(dia(neg(p))), box(p));
  for (LogicId l : {LogicId::CN4K, LogicId::CN4K_PM, LogicId::CN4K_YV}) {
    require_not_provable(join_lr, l);
    require_not_provable(join_rl, l);
  }
  Fml join_dia_lr = impl(dia(p), neg(box(neg(p))));
  Fml join_dia_rl = impl(neg(box(neg(p))), dia(p));
  for (LogicId l : {LogicId::CN4K, LogicId::CN4K_PM, LogicId::CN4K_YV}) {
    require_not_provable(join_dia_lr, l);
    require_not_provable(join_dia_rl, l);
  }
  Fml pm_box = impl(box(impl(p, q)), impl(dia(p), dia(q)));
  require_not_provable(pm_box, LogicId::CN4K);
  Fml yv_box = impl(box(impl(p, q)), impl(neg(box(neg(p))), neg(box(neg(q)))));
  require_not_provable(yv_box, LogicId::CN4K);
}

TEST_CASE("contradictions do not explode") {
  Fml p = var("p"), q = var("q");
  Fml boom = impl(conj(p, neg(p)), q);
  Fml boom2 = impl(conj(p, neg(p)), conj(q, neg(q)));
  for (LogicId l : all_logics) {
    require_not_provable(boom, l);
    require_not_provable(boom2, l);
  }
}

TEST_CASE("modal logic without reflexivity or seriality") {
  Fml p = var("p");
  for (LogicId l : all_logics) {
    require_not_provable(impl(box(p), p), l);
    require_not_provable(dia(impl(p, p)), l);
    require_not_provable(impl(p, box(p)), l);
  }
}

TEST_CASE("sequents with antecedents") {
  for (LogicId l : all_logics) {
    DecideResult r = decide(parse_sequent("p -> q, p => q"), l);
    CHECK(r.verdict == Verdict::Proved);
    r = decide(parse_sequent("[](p -> q), []p => []q"), l);
    CHECK(r.verdict == Verdict::Proved);
    r = decide(parse_sequent("~<>p, ~<>q => ~<>(p | q)"), l);
    CHECK(r.verdict == Verdict::Proved);
    r = decide(parse_sequent("p => q"), l);
    CHECK(r.verdict == Verdict::NotProvable);
  }
  DecideResult j = decide(parse_sequent("[]p => ~<>~p"), LogicId::CN4K_JOIN);
  CHECK(j.verdict == Verdict::Proved);
  j = decide(parse_sequent("[]p => ~<>~p"), LogicId::CN4K);
  CHECK(j.verdict == Verdict::NotProvable);
}

TEST_CASE("duplicate antecedent occurrences are preserved in the proof") {
  Sequent s = parse_sequent("p, p => p");
  DecideResult r = decide(s, LogicId::CN4K);
  REQUIRE(r.verdict == Verdict::Proved);
  REQUIRE(r.proof);
  CHECK(r.proof->seq.antecedent.size() == 2);
  CHECK(same_sequent(r.proof->seq, s));
  CheckReport chk = check_proof(*r.proof, LogicId::CN4K);
  CHECK(chk.ok);

  Sequent dup = parse_sequent("p & q, p & q, r => q");
  r = decide(dup, LogicId::CN4K_ONE);
  REQUIRE(r.verdict == Verdict::Proved);
  CHECK(same_sequent(r.proof->seq, dup));
  CHECK(check_proof(*r.proof, LogicId::CN4K_ONE).ok);
}

TEST_CASE("detachment stays inside the provable set") {
  Fml p = var("p"), q = var("q");
  Fml a = impl(p, impl(q, p));
  // derive q -> (p -> (q -> p)) from a1 twice and mp
  Fml b = impl(q, a);
  for (LogicId l : all_logics) {
    REQUIRE(decide_formula(a, l).verdict == Verdict::Proved);
    REQUIRE(decide_formula(impl(a, b), l).verdict == Verdict::Proved);
    CHECK(decide_formula(b, l).verdict == Verdict::Proved);
  }
}

TEST_CASE("budget caps the search") {
  Fml hard = parse("(p -> q) -> ((q -> r) -> (p -> r))");
  ProveOptions tiny;
  tiny.budget = 2;
  DecideResult r = decide_formula(hard, LogicId::CN4K, tiny);
  CHECK(r.verdict == Verdict::BudgetExceeded);
  CHECK_FALSE(r.proof);
  DecideResult full = decide_formula(hard, LogicId::CN4K);
  CHECK(full.verdict == Verdict::Proved);
  CHECK(full.stats.nodes > 2);
}

TEST_CASE("cache does not change verdicts") {
  std::vector<std::string> names = {"p", "q"};
  std::mt19937_64 rng(424242);
  ProveOptions cached, uncached;
  uncached.use_cache = false;
  for (LogicId l : all_logics) {
    for (int trial = 0; trial < 80; ++trial) {
      Fml f = random_formula(rng, 3, names);
      DecideResult a = decide_formula(f, l, cached);
      DecideResult b = decide_formula(f, l, uncached);
      INFO(render(f) << " under " << logic_name(l));
      CHECK(a.verdict == b.verdict);
      if (a.verdict == Verdict::Proved) {
        CHECK(check_proof(*a.proof, l).ok);
        CHECK(check_proof(*b.proof, l).ok);
      }
    }
  }
}

TEST_CASE("provability grows along the logic lattice") {
  std::vector<std::string> names = {"p", "q"};
  std::mt19937_64 rng(777);
  int base_proved = 0;
  for (int trial = 0; trial < 250; ++trial) {
    Fml f = random_formula(rng, 3, names);
    if (decide_formula(f, LogicId::CN4K).verdict == Verdict::Proved) {
      ++base_proved;
      for (LogicId l : all_logics) {
        INFO(render(f) << " proved in the base logic but not under " << logic_name(l));
        CHECK(decide_formula(f, l).verdict == Verdict::Proved);
      }
    }
    for (LogicId l : {LogicId::CN4K_PM, LogicId::CN4K_YV, LogicId::CN4K_JOIN}) {
      if (decide_formula(f, l).verdict == Verdict::Proved) {
        INFO(render(f) << " proved under " << logic_name(l) << " but not in the top logic");
        CHECK(decide_formula(f, LogicId::CN4K_ONE).verdict == Verdict::Proved);
      }
    }
  }
  CHECK(base_proved > 0); // the sample must exercise the provable side
}

TEST_CASE("cut certificates are replaced by cut-free proofs") {
  Fml t = impl(var("p"), var("p"));
  DecideResult base = decide_formula(t, LogicId::CN4K);
  REQUIRE(base.verdict == Verdict::Proved);
  DecideResult boxed_prem = decide(Sequent{{}, t}, LogicId::CN4K);
  REQUIRE(boxed_prem.verdict == Verdict::Proved);
  ProofTree right{Sequent{{t}, box(t)}, RuleId::Box, -1, {*boxed_prem.proof}};
  ProofTree cut{Sequent{{}, box(t)}, RuleId::Cut, -1, {*base.proof, right}};
  REQUIRE(check_proof(cut, LogicId::CN4K, true).ok);
  REQUIRE_FALSE(check_proof(cut, LogicId::CN4K, false).ok);

  HarnessReport rep = cut_admissibility_harness(cut, LogicId::CN4K);
  INFO(rep.detail);
  REQUIRE(rep.ok);
  REQUIRE(rep.proof);
  CHECK(check_proof(*rep.proof, LogicId::CN4K, false).ok);
  CHECK(same_sequent(rep.proof->seq, cut.seq));

  // an invalid certificate is reported, not replaced
  ProofTree broken = cut;
  broken.children[0].seq.succedent = var("q");
  HarnessReport bad = cut_admissibility_harness(broken, LogicId::CN4K);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("provable disjunctions have a provable disjunct") {
  Fml p = var("p"), q = var("q");
  std::vector<Fml> provable = {
      disj(impl(p, p), q),
      disj(q, impl(p, p)),
      disj(impl(conj(p, q), p), impl(p, disj(p, q))),
      disj(box(impl(p, p)), p),
  };
  for (LogicId l : all_logics) {
    for (Fml f : provable) {
      HarnessReport rep = disjunction_property_check(f, l);
      INFO(render(f) << " under " << logic_name(l) << ": " << rep.detail);
      CHECK(rep.ok);
    }
  }
  HarnessReport vac = disjunction_property_check(disj(p, q), LogicId::CN4K);
  CHECK(vac.ok); // not provable, nothing to witness
  CHECK_FALSE(disjunction_property_check(p, LogicId::CN4K).ok);
}

TEST_CASE("provable negated conjunctions have a refutable conjunct") {
  Fml p = var("p"), q = var("q");
  Fml t = impl(p, p);
  std::vector<Fml> provable = {
      neg(conj(neg(t), q)),
      neg(conj(q, neg(t))),
      neg(conj(neg(t), neg(t))),
  };
  for (LogicId l : all_logics) {
    for (Fml f : provable) {
      HarnessReport rep = constructive_falsity_check(f, l);
      INFO(render(f) << " under " << logic_name(l) << ": " << rep.detail);
      CHECK(rep.ok);
    }
  }
  HarnessReport vac = constructive_falsity_check(neg(conj(p, q)), LogicId::CN4K);
  CHECK(vac.ok);
  CHECK_FALSE(constructive_falsity_check(disj(p, q), LogicId::CN4K).ok);
}

TEST_CASE("searches that loop through implications still terminate") {
  // Peirce-style loops exercise the history check
  Fml f = parse("((p -> q) -> p) -> p");
  for (LogicId l : all_logics) require_not_provable(f, l);
  Fml g = parse("((((p -> q) -> p) -> p) -> q) -> q");
  for (LogicId l : all_logics) {
    DecideResult r = decide_formula(g, l);
    CHECK(r.verdict != Verdict::BudgetExceeded);
  }
}
