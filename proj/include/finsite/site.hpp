// Sieves, the presheaf Ω of truth values, Lawvere-Tierney coverages,
// Grothendieck coverages, and the correspondence between the two.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "finsite/fincat.hpp"

namespace finsite {

// A sieve on `base`: a set of morphisms with codomain `base` closed under
// precomposition. members has one flag per morphism of the category.
struct Sieve {
  int base = 0;
  std::vector<bool> members;

  bool contains(int m) const { return members[m]; }
  bool operator==(const Sieve&) const = default;
  bool operator<(const Sieve& o) const {
    return members < o.members;
  }
};

Sieve maximal_sieve(const FinCategory& c, int a);
Sieve empty_sieve(const FinCategory& c, int a);
bool is_precomposition_closed(const FinCategory& c, const Sieve& s);
Sieve make_sieve(const FinCategory& c, int a, const std::vector<int>& members);

// P·φ = { ψ : c → dom(φ) | φ∘ψ ∈ P }, for φ with cod(φ) = P.base.
Sieve restrict_sieve(const FinCategory& c, const Sieve& p, int phi);

// Ω as a presheaf: the carrier at a lists all sieves on a in a canonical
// order; the action along φ is sieve restriction.
struct OmegaPresheaf {
  CatPtr cat;
  PshPtr psh;
  std::vector<std::vector<Sieve>> sieves;   // sieves[a][i]

  int index_of(int a, const Sieve& s) const;
  int maximal_index(int a) const;
};

using OmegaPtr = std::shared_ptr<const OmegaPresheaf>;

OmegaPtr build_omega(CatPtr cat);

// A coverage: per object, a set of sieves, stored as a selection over Ω's
// carrier. Coverage values are always subpresheaves of Ω in the sense of
// condition (L); check_lt_coverage reports when they are not.
struct Coverage {
  OmegaPtr omega;
  std::vector<std::vector<bool>> sel;   // sel[a][i] over omega->sieves[a]

  bool covers(int a, const Sieve& s) const;
  Subpresheaf as_subpresheaf() const;
  std::vector<Sieve> sieves_at(int a) const;
  bool operator==(const Coverage& o) const { return sel == o.sel; }
};

Coverage coverage_from_sieves(OmegaPtr omega,
                              const std::vector<std::vector<Sieve>>& js);
Coverage trivial_coverage(OmegaPtr omega);
Coverage all_sieves_coverage(OmegaPtr omega);

// { p : Ω | ¬¬p }, computed in the Heyting algebra of subobjects of 𝐲(a).
Coverage double_negation_coverage(OmegaPtr omega);

struct CoverageReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

// (L) subpresheaf condition, (C1) maximal sieves covering, (C2)
// transitivity. Violations are report entries, not errors.
CoverageReport check_lt_coverage(const Coverage& j);

// The same data read as a Grothendieck coverage: maximality (M), local
// character (L), transitivity (T), reported separately.
CoverageReport grothendieck_check(const Coverage& j);

// All valid coverages on the site, by filtering subpresheaves of Ω through
// check_lt_coverage. Throws InputError when the number of subpresheaves of
// Ω exceeds `cap`.
std::vector<Coverage> enumerate_coverages(OmegaPtr omega, std::size_t cap);

}  // namespace finsite
