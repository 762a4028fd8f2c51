// Small combinators for assembling Hilbert derivations in tests.
#pragma once

#include <cn4k/hilbert.hpp>

namespace cn4k::testsupport {

// Appends an axiom line; returns its 0-based index.
inline int emit_ax(HilbertDerivation& d, const std::string& scheme, Fml f) {
  d.steps.push_back({f, HilbertStep::Just::Axiom, scheme, -1, -1, false});
  return static_cast<int>(d.steps.size()) - 1;
}

inline int emit_hyp(HilbertDerivation& d, Fml f) {
  d.steps.push_back({f, HilbertStep::Just::Hyp, "", -1, -1, false});
  return static_cast<int>(d.steps.size()) - 1;
}

// From line i (phi) and line j (phi -> chi) concludes chi.
inline int emit_mp(HilbertDerivation& d, int i, int j) {
  Fml maj = d.steps[j].formula;
  d.steps.push_back({maj->r, HilbertStep::Just::MP, "", i, j, false});
  return static_cast<int>(d.steps.size()) - 1;
}

inline int emit_modal(HilbertDerivation& d, HilbertStep::Just kind, int i) {
  Fml conc = *modal_rule_conclusion(kind, d.steps[i].formula);
  d.steps.push_back({conc, kind, "", i, -1, false});
  return static_cast<int>(d.steps.size()) - 1;
}

// From i: a -> b and j: b -> c derives a -> c.
inline int emit_syllogism(HilbertDerivation& d, int i, int j) {
  Fml a = d.steps[i].formula->l, b = d.steps[i].formula->r;
  Fml c = d.steps[j].formula->r;
  int k1 = emit_ax(d, "a1", impl(impl(b, c), impl(a, impl(b, c))));
  int k2 = emit_mp(d, j, k1);
  int k3 = emit_ax(d, "a2", impl(impl(a, impl(b, c)), impl(impl(a, b), impl(a, c))));
  int k4 = emit_mp(d, k2, k3);
  return emit_mp(d, i, k4);
}

// From i: x -> y and j: x -> z derives x -> (y & z).
inline int emit_compose_conj(HilbertDerivation& d, int i, int j) {
  Fml x = d.steps[i].formula->l, y = d.steps[i].formula->r;
  Fml z = d.steps[j].formula->r;
  int k1 = emit_ax(d, "a5", impl(y, impl(z, conj(y, z))));
  int k2 = emit_syllogism(d, i, k1); // x -> (z -> (y & z))
  int k3 = emit_ax(d, "a2", impl(impl(x, impl(z, conj(y, z))),
                                 impl(impl(x, z), impl(x, conj(y, z)))));
  int k4 = emit_mp(d, k2, k3);
  return emit_mp(d, j, k4);
}

// From i: a and j: b derives a & b.
inline int emit_pair(HilbertDerivation& d, int i, int j) {
  Fml a = d.steps[i].formula, b = d.steps[j].formula;
  int k1 = emit_ax(d, "a5", impl(a, impl(b, conj(a, b))));
  int k2 = emit_mp(d, i, k1);
  return emit_mp(d, j, k2);
}

// Derives phi -> phi from scratch.
inline int emit_identity(HilbertDerivation& d, Fml phi) {
  Fml t = impl(phi, phi);
  int k1 = emit_ax(d, "a1", impl(phi, impl(t, phi)));
  int k2 = emit_ax(d, "a2", impl(impl(phi, impl(t, phi)), impl(impl(phi, t), t)));
  int k3 = emit_mp(d, k1, k2);
  int k4 = emit_ax(d, "a1", impl(phi, t));
  return emit_mp(d, k4, k3);
}

} // namespace cn4k::testsupport
