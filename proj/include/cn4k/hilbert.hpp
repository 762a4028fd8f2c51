// Axiom-scheme recognition and line-by-line Hilbert derivation checking,
// with the theorems-only restriction on modal rules tracked per line.
#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formula.hpp"
#include "logic.hpp"

namespace cn4k {

using Subst = std::map<std::string, Fml>;

namespace detail {

// Pattern leaves are metavariables; they match any subtree, consistently.
inline bool match_pattern(Fml pat, Fml f, Subst& subst) {
  if (pat->is(Formula::Kind::Var)) {
    auto it = subst.find(pat->name);
    if (it != subst.end()) return it->second == f;
    subst.emplace(pat->name, f);
    return true;
  }
  if (pat->kind != f->kind) return false;
  if (pat->l && !match_pattern(pat->l, f->l, subst)) return false;
  if (pat->r && !match_pattern(pat->r, f->r, subst)) return false;
  return true;
}

} // namespace detail

struct AxiomScheme {
  std::string name;
  Fml pattern;
  uint8_t logics; // bit per LogicId index
};

inline bool scheme_in_logic(const AxiomScheme& s, LogicId l) {
  return (s.logics >> static_cast<int>(l)) & 1;
}

// Fixed matching order; first match wins.
inline const std::vector<AxiomScheme>& axiom_schemes() {
  static const std::vector<AxiomScheme> table = [] {
    constexpr uint8_t ALL = 0b11111;
    constexpr uint8_t PM = (1 << 1) | (1 << 4);
    constexpr uint8_t YV = (1 << 2) | (1 << 4);
    constexpr uint8_t JOIN = (1 << 3) | (1 << 4);
    Fml A = var("phi"), B = var("chi"), C = var("psi");
    std::vector<AxiomScheme> t;
    auto add = [&](const char* name, Fml pat, uint8_t mask) { t.push_back({name, pat, mask}); };
    add("a1", impl(A, impl(B, A)), ALL);
    add("a2", impl(impl(A, impl(B, C)), impl(impl(A, B), impl(A, C))), ALL);
    add("a3", impl(conj(A, B), A), ALL);
    add("a4", impl(conj(A, B), B), ALL);
    add("a5", impl(A, impl(B, conj(A, B))), ALL);
    add("a6", impl(A, disj(A, B)), ALL);
    add("a7", impl(B, disj(A, B)), ALL);
    add("a8", impl(impl(A, C), impl(impl(B, C), impl(disj(A, B), C))), ALL);
    add("nn", iff(neg(neg(A)), A), ALL);
    add("nn_lr", impl(neg(neg(A)), A), ALL);
    add("nn_rl", impl(A, neg(neg(A))), ALL);
    add("dem_and", iff(neg(conj(A, B)), disj(neg(A), neg(B))), ALL);
    add("dem_and_lr", impl(neg(conj(A, B)), disj(neg(A), neg(B))), ALL);
    add("dem_and_rl", impl(disj(neg(A), neg(B)), neg(conj(A, B))), ALL);
    add("dem_or", iff(neg(disj(A, B)), conj(neg(A), neg(B))), ALL);
    add("dem_or_lr", impl(neg(disj(A, B)), conj(neg(A), neg(B))), ALL);
    add("dem_or_rl", impl(conj(neg(A), neg(B)), neg(disj(A, B))), ALL);
    add("dem_impl", iff(neg(impl(A, B)), conj(A, neg(B))), ALL);
    add("dem_impl_lr", impl(neg(impl(A, B)), conj(A, neg(B))), ALL);
    add("dem_impl_rl", impl(conj(A, neg(B)), neg(impl(A, B))), ALL);
    add("top_box", box(impl(A, A)), ALL);
    add("top_dia", neg(dia(neg(impl(A, A)))), ALL);
    add("and_box", impl(conj(box(A), box(B)), box(conj(A, B))), ALL);
    add("and_dia", impl(conj(neg(dia(A)), neg(dia(B))), neg(dia(disj(A, B)))), ALL);
    add("pm_box", impl(box(impl(A, B)), impl(dia(A), dia(B))), PM);
    add("pm_dia", impl(neg(dia(neg(impl(neg(A), neg(B))))), impl(neg(box(A)), neg(box(B)))), PM);
    add("yv_box", impl(box(impl(A, B)), impl(neg(box(neg(A))), neg(box(neg(B))))), YV);
    add("yv_dia", impl(neg(dia(neg(impl(A, B)))), impl(dia(A), dia(B))), YV);
    add("join_box", iff(box(A), neg(dia(neg(A)))), JOIN);
    add("join_box_lr", impl(box(A), neg(dia(neg(A)))), JOIN);
    add("join_box_rl", impl(neg(dia(neg(A))), box(A)), JOIN);
    add("join_dia", iff(dia(A), neg(box(neg(A)))), JOIN);
    add("join_dia_lr", impl(dia(A), neg(box(neg(A)))), JOIN);
    add("join_dia_rl", impl(neg(box(neg(A))), dia(A)), JOIN);
    return t;
  }();
  return table;
}

inline const AxiomScheme* find_scheme(const std::string& name) {
  for (const AxiomScheme& s : axiom_schemes())
    if (s.name == name) return &s;
  return nullptr;
}

inline std::optional<std::pair<std::string, Subst>> match_axiom(Fml f, LogicId logic) {
  for (const AxiomScheme& s : axiom_schemes()) {
    if (!scheme_in_logic(s, logic)) continue;
    Subst subst;
    if (detail::match_pattern(s.pattern, f, subst)) return std::make_pair(s.name, subst);
  }
  return std::nullopt;
}

struct HilbertStep {
  enum class Just { Hyp, Axiom, MP, RBox, RDia, RnBox, RnDia };

  Fml formula;
  Just kind;
  std::string scheme; // Axiom only
  int i = -1, j = -1; // 0-based premise lines; MP uses both, modal rules use i
  bool depends_on_hyps = false; // computed by check_derivation
};

struct HilbertDerivation {
  FmlSet hypotheses;
  std::vector<HilbertStep> steps;
  LogicId logic = LogicId::CN4K;
};

struct HilbertVerdict {
  bool ok = true;
  int line = -1; // 1-based first failing line
  std::string reason;
  bool structural = false; // dangling refs vs logical failures

  static HilbertVerdict failure(int line0, std::string reason, bool structural) {
    return HilbertVerdict{false, line0 + 1, std::move(reason), structural};
  }
};

inline const char* rule_word(HilbertStep::Just k) {
  switch (k) {
    case HilbertStep::Just::Hyp: return "hyp";
    case HilbertStep::Just::Axiom: return "ax";
    case HilbertStep::Just::MP: return "mp";
    case HilbertStep::Just::RBox: return "r_box";
    case HilbertStep::Just::RDia: return "r_dia";
    case HilbertStep::Just::RnBox: return "rn_box";
    case HilbertStep::Just::RnDia: return "rn_dia";
  }
  return "?";
}

// Modal rule premise/conclusion shapes: r_box: phi->chi over []phi->[]chi;
// r_dia likewise with <>; rn_box: ~phi->~chi over ~[]phi->~[]chi; rn_dia with ~<>.
inline std::optional<Fml> modal_rule_conclusion(HilbertStep::Just kind, Fml premise) {
  using K = Formula::Kind;
  if (kind == HilbertStep::Just::RBox || kind == HilbertStep::Just::RDia) {
    if (!premise->is(K::Impl)) return std::nullopt;
    Fml a = premise->l, b = premise->r;
    if (kind == HilbertStep::Just::RBox) return impl(box(a), box(b));
    return impl(dia(a), dia(b));
  }
  if (!premise->is(K::Impl)) return std::nullopt;
  Fml a = premise->l, b = premise->r;
  if (!a->is(K::Neg) || !b->is(K::Neg)) return std::nullopt;
  if (kind == HilbertStep::Just::RnBox) return impl(neg(box(a->l)), neg(box(b->l)));
  return impl(neg(dia(a->l)), neg(dia(b->l)));
}

inline HilbertVerdict check_derivation(HilbertDerivation& d) {
  if (d.steps.empty()) return HilbertVerdict::failure(-1, "empty derivation", true);
  for (size_t n = 0; n < d.steps.size(); ++n) {
    HilbertStep& st = d.steps[n];
    auto check_ref = [&](int r) { return r >= 0 && static_cast<size_t>(r) < n; };
    switch (st.kind) {
      case HilbertStep::Just::Hyp:
        if (!d.hypotheses.count(st.formula))
          return HilbertVerdict::failure(n, "formula is not among the hypotheses", false);
        st.depends_on_hyps = true;
        break;
      case HilbertStep::Just::Axiom: {
        const AxiomScheme* s = find_scheme(st.scheme);
        if (!s) return HilbertVerdict::failure(n, "unknown axiom scheme '" + st.scheme + "'", false);
        if (!scheme_in_logic(*s, d.logic))
          return HilbertVerdict::failure(n, "scheme '" + st.scheme + "' is not in this logic", false);
        Subst subst;
        if (!detail::match_pattern(s->pattern, st.formula, subst))
          return HilbertVerdict::failure(n, "formula is not an instance of '" + st.scheme + "'", false);
        st.depends_on_hyps = false;
        break;
      }
      case HilbertStep::Just::MP: {
        if (!check_ref(st.i) || !check_ref(st.j))
          return HilbertVerdict::failure(n, "mp references a line that does not precede this one", true);
        Fml expected = impl(d.steps[st.i].formula, st.formula);
        if (d.steps[st.j].formula != expected)
          return HilbertVerdict::failure(
              n, "mp mismatch: line " + std::to_string(st.j + 1) + " is not (line " +
                     std::to_string(st.i + 1) + ") -> (this line)", false);
        st.depends_on_hyps = d.steps[st.i].depends_on_hyps || d.steps[st.j].depends_on_hyps;
        break;
      }
      default: {
        if (!check_ref(st.i))
          return HilbertVerdict::failure(n, "modal rule references a line that does not precede this one", true);
        std::optional<Fml> conc = modal_rule_conclusion(st.kind, d.steps[st.i].formula);
        if (!conc)
          return HilbertVerdict::failure(
              n, std::string("premise of ") + rule_word(st.kind) + " has the wrong shape", false);
        if (*conc != st.formula)
          return HilbertVerdict::failure(
              n, std::string("conclusion does not follow from line ") + std::to_string(st.i + 1) +
                     " by " + rule_word(st.kind), false);
        if (d.steps[st.i].depends_on_hyps)
          return HilbertVerdict::failure(
              n, "modal rules apply to theorems only, but the premise depends on a hypothesis", false);
        st.depends_on_hyps = false;
        break;
      }
    }
  }
  return HilbertVerdict{};
}

struct HilbertError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Appends the standard simulation of necessitation: from theorem phi, derive
// []phi via a1, mp, r_box, and top_box.
inline HilbertDerivation derived_rule_nec(const HilbertDerivation& d) {
  HilbertDerivation out = d;
  HilbertVerdict v = check_derivation(out);
  if (!v.ok) throw HilbertError("input derivation does not check: " + v.reason);
  if (out.steps.back().depends_on_hyps)
    throw HilbertError("last line depends on a hypothesis; necessitation needs a theorem");
  Fml phi = out.steps.back().formula;
  int k = static_cast<int>(out.steps.size()) - 1; // index of phi
  Fml t = impl(phi, phi);
  // phi -> ((phi -> phi) -> phi)
  out.steps.push_back({impl(phi, impl(t, phi)), HilbertStep::Just::Axiom, "a1", -1, -1, false});
  // (phi -> phi) -> phi
  out.steps.push_back({impl(t, phi), HilbertStep::Just::MP, "", k, k + 1, false});
  // [](phi -> phi) -> []phi
  out.steps.push_back({impl(box(t), box(phi)), HilbertStep::Just::RBox, "", k + 2, -1, false});
  // [](phi -> phi)
  out.steps.push_back({box(t), HilbertStep::Just::Axiom, "top_box", -1, -1, false});
  // []phi
  out.steps.push_back({box(phi), HilbertStep::Just::MP, "", k + 4, k + 3, false});
  v = check_derivation(out);
  if (!v.ok) throw HilbertError("internal: produced derivation fails at line " +
                                std::to_string(v.line) + ": " + v.reason);
  return out;
}

// --- derivation file format ---------------------------------------------
// logic: cn4k
// hyps: p, q -> r
// 1. p ; hyp
// 2. p -> (q -> p) ; ax a1
// 3. q -> p ; mp 1 2

struct DerivationFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline HilbertDerivation parse_derivation(const std::string& text) {
  HilbertDerivation d;
  bool logic_seen = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int expected_index = 1;
  auto bad = [&](const std::string& msg) {
    return DerivationFormatError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](const std::string& s) {
      size_t a = s.find_first_not_of(" \t\r\n");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t\r\n");
      return s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("logic:", 0) == 0) {
      auto l = parse_logic(trim(line.substr(6)));
      if (!l) throw bad("unknown logic '" + trim(line.substr(6)) + "'");
      d.logic = *l;
      logic_seen = true;
      continue;
    }
    if (line.rfind("hyps:", 0) == 0) {
      std::string rest = trim(line.substr(5));
      if (rest.empty()) continue;
      size_t start = 0;
      while (start <= rest.size()) {
        size_t comma = rest.find(',', start);
        std::string part = trim(comma == std::string::npos ? rest.substr(start)
                                                           : rest.substr(start, comma - start));
        if (part.empty()) throw bad("empty hypothesis");
        try {
          d.hypotheses.insert(parse(part));
        } catch (const ParseError& e) {
          throw bad(std::string("bad hypothesis: ") + e.what());
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      continue;
    }
    // numbered step: "n. formula ; justification"
    size_t dot = line.find('.');
    if (dot == std::string::npos) throw bad("expected 'n. formula ; justification'");
    int idx;
    try {
      idx = std::stoi(line.substr(0, dot));
    } catch (...) {
      throw bad("bad line number");
    }
    if (idx != expected_index)
      throw bad("expected line number " + std::to_string(expected_index));
    ++expected_index;
    size_t semi = line.find(';', dot);
    if (semi == std::string::npos) throw bad("missing ';' before justification");
    std::string ftext = trim(line.substr(dot + 1, semi - dot - 1));
    std::string jtext = trim(line.substr(semi + 1));
    HilbertStep st;
    try {
      st.formula = parse(ftext);
    } catch (const ParseError& e) {
      throw bad(std::string("bad formula: ") + e.what());
    }
    std::istringstream js(jtext);
    std::string word;
    js >> word;
    auto read_ref = [&](int& dst) {
      int v;
      if (!(js >> v) || v < 1) throw bad("justification needs a positive line reference");
      dst = v - 1;
    };
    if (word == "hyp") {
      st.kind = HilbertStep::Just::Hyp;
    } else if (word == "ax") {
      st.kind = HilbertStep::Just::Axiom;
      if (!(js >> st.scheme)) throw bad("ax needs a scheme name");
    } else if (word == "mp") {
      st.kind = HilbertStep::Just::MP;
      read_ref(st.i);
      read_ref(st.j);
    } else if (word == "r_box" || word == "r_dia" || word == "rn_box" || word == "rn_dia") {
      st.kind = word == "r_box" ? HilbertStep::Just::RBox
                : word == "r_dia" ? HilbertStep::Just::RDia
                : word == "rn_box" ? HilbertStep::Just::RnBox
                                   : HilbertStep::Just::RnDia;
      read_ref(st.i);
    } else {
      throw bad("unknown justification '" + word + "'");
    }
    std::string extra;
    if (js >> extra) throw bad("trailing tokens after justification");
    d.steps.push_back(st);
  }
  if (!logic_seen) throw DerivationFormatError("missing 'logic:' header");
  if (d.steps.empty()) throw DerivationFormatError("no derivation lines");
  return d;
}

inline std::string render_derivation(const HilbertDerivation& d) {
  std::ostringstream out;
  out << "logic: " << logic_name(d.logic) << "\n";
  if (!d.hypotheses.empty()) {
    out << "hyps:";
    bool first = true;
    for (Fml h : d.hypotheses) {
      out << (first ? " " : ", ") << render(h);
      first = false;
    }
    out << "\n";
  }
  for (size_t n = 0; n < d.steps.size(); ++n) {
    const HilbertStep& st = d.steps[n];
    out << (n + 1) << ". " << render(st.formula) << " ; " << rule_word(st.kind);
    if (st.kind == HilbertStep::Just::Axiom) out << " " << st.scheme;
    else if (st.kind == HilbertStep::Just::MP) out << " " << (st.i + 1) << " " << (st.j + 1);
    else if (st.kind != HilbertStep::Just::Hyp) out << " " << (st.i + 1);
    out << "\n";
  }
  return out.str();
}

} // namespace cn4k
