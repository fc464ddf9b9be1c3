// Shared fixture sites and presheaves for the test suites: the terminal
// category, the Sierpinski poset 0 ≤ 1, and the two-element idempotent
// monoid, with their trivial / double-negation / all-sieves coverages.
#pragma once

#include <vector>

#include "finsite/closure.hpp"
#include "finsite/fincat.hpp"
#include "finsite/site.hpp"

namespace finsite::fixtures {

inline CatPtr terminal_cat() {
  return std::make_shared<FinCategory>(make_terminal_category());
}

inline CatPtr sierpinski() {
  return std::make_shared<FinCategory>(make_poset_category(2, {{0, 1}}));
}

// One object, morphisms {1, e} with e∘e = e.
inline CatPtr idem_monoid() {
  return std::make_shared<FinCategory>(
      make_monoid_category({"1", "e"}, 0, {{0, 1}, {1, 1}}));
}

// Morphism indices in the Sierpinski fixture.
inline int sier_u(const FinCategory& c) {
  for (int m = 0; m < c.num_morphisms(); ++m)
    if (c.dom(m) == 0 && c.cod(m) == 1) return m;
  throw InputError("fixture: no arrow 0 -> 1");
}

struct Site {
  CatPtr cat;
  OmegaPtr omega;
  Coverage coverage;
  const char* name;
};

inline std::vector<Site> all_sites() {
  std::vector<Site> out;
  for (CatPtr cat : {terminal_cat(), sierpinski(), idem_monoid()}) {
    OmegaPtr om = build_omega(cat);
    out.push_back({cat, om, trivial_coverage(om), "trivial"});
    out.push_back({cat, om, double_negation_coverage(om), "dense"});
    out.push_back({cat, om, all_sieves_coverage(om), "all-sieves"});
  }
  return out;
}

inline Site sierpinski_dense() {
  CatPtr cat = sierpinski();
  OmegaPtr om = build_omega(cat);
  return {cat, om, double_negation_coverage(om), "dense"};
}

// The non-separated Sierpinski fixture: X(1) = {a,b}, X(0) = {c}.
inline PshPtr collapse_two(CatPtr cat) {
  const FinCategory& c = *cat;
  std::vector<int> card{1, 2};
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    action[m].assign(card[c.cod(m)], 0);
    if (c.dom(m) == c.cod(m))
      for (int i = 0; i < card[c.cod(m)]; ++i) action[m][i] = i;
  }
  return make_presheaf(cat, std::move(card), std::move(action));
}

// Representative small presheaves on a fixture category, carriers ≤ 3.
inline std::vector<PshPtr> fixture_presheaves(CatPtr cat) {
  std::vector<PshPtr> out;
  out.push_back(initial_presheaf(cat));
  out.push_back(terminal_presheaf(cat));
  out.push_back(constant_presheaf(cat, 2));
  out.push_back(constant_presheaf(cat, 3));
  for (int a = 0; a < cat->num_objects(); ++a)
    out.push_back(yoneda(cat, a));
  if (cat->num_objects() == 2) out.push_back(collapse_two(cat));
  return out;
}

}  // namespace finsite::fixtures
