// Sheaf and separated predicates, the associated sheaf functor with its
// unit, extension along dense monos, the double-plus oracle, and sheaf
// exponentials.
#pragma once

#include "finsite/powerobj.hpp"

namespace finsite {

// Matching families over a covering sieve decide both predicates:
// X is a sheaf iff every matching family on every covering sieve has a
// unique amalgamation; separated asks for at most one.
bool is_separated(const ClosureContext& ctx, PshPtr x);
bool is_sheaf(const ClosureContext& ctx, PshPtr x);

// A matching family on a sieve S on a, encoded as a natural transformation
// from the reified sieve (carrier at b = members of S with domain b).
struct SieveShape {
  Sieve sieve;
  PshPtr psh;
  std::vector<std::vector<int>> members;   // members[b][i] = morphism index
};
SieveShape reify_sieve(CatPtr cat, const Sieve& s);

std::vector<NatTrans> matching_families(const SieveShape& shape, PshPtr x);
// Elements of X(a) restricting to the family along every member of S.
std::vector<int> amalgamations(const SieveShape& shape, const NatTrans& fam,
                               PshPtr x);

struct SheafificationResult {
  PshPtr input;
  PJPtr pj;
  NatTrans sigma;          // X → P_J(X), x ↦ [{x}]
  Subpresheaf image;       // X′ ⊆ P_J(X)
  Subpresheaf closed_sub;  // a(X) = C(X′) as a subobject of P_J(X)
  PshPtr sheaf;            // a(X) reified
  NatTrans incl;           // a(X) ↣ P_J(X)
  NatTrans unit;           // η: X → a(X)
};

SheafificationResult sheafify(const PowerContext& pc, PshPtr x);

// Functor action on maps: a(f): a(X) → a(Y), computed by descending f
// through the epi part of η and extending along its dense mono part.
NatTrans sheafify_map(const PowerContext& pc, const SheafificationResult& sx,
                      const SheafificationResult& sy, const NatTrans& f);

// The unique u with u∘m = v for a dense mono m: B ↣ A (as a subobject of
// A) and v: B → X into a sheaf; computed by amalgamation stage by stage.
NatTrans extend_along_dense(const ClosureContext& ctx, const Subpresheaf& m,
                            const NatTrans& v);

// Plus construction: X⁺(a) = matching families over covering sieves,
// modulo agreement on a common covering refinement. An independent oracle
// for the associated sheaf functor; applied twice it yields a sheaf.
struct PlusResult {
  PshPtr plus;
  NatTrans to_plus;        // X → X⁺
};
PlusResult plus_construction(const ClosureContext& ctx, PshPtr x);

struct DoublePlusResult {
  PshPtr sheaf;            // X⁺⁺
  NatTrans unit;           // X → X⁺⁺
};
DoublePlusResult double_plus_oracle(const ClosureContext& ctx, PshPtr x);

// Left-exactness battery: compares a(lim D) with lim a(D) through the
// canonical comparison map for a list of finite-limit diagrams.
struct LeftExactnessInstance {
  std::string label;
  bool comparison_iso = false;
};
std::vector<LeftExactnessInstance> check_left_exactness(
    const PowerContext& pc, const std::vector<PresheafDiagram>& diagrams);

// Witness data for a locally small sheaf X: an everywhere-nonempty B and a
// family S ⊆ B×X whose inclusion is dense in B×X.
struct ExponentialWitness {
  PshPtr b;
  Product bx;              // B×X
  Subpresheaf family;      // S ⊆ B×X
};

// The exponential Y^X in sheaves, built as the quotient of Σ_{b:B} Y^{S_b}
// by agreement on overlaps. Rejects invalid witnesses.
PshPtr sheaf_exponential(const PowerContext& pc, PshPtr x,
                         const ExponentialWitness& w, PshPtr y);

// Presheaf exponential Y^X(a) = Nat(𝐲(a)×X, Y): the comparison oracle.
PshPtr presheaf_exponential(PshPtr x, PshPtr y);

// Caches sheafification results per object so repeated functor actions
// share carriers (and the power objects behind them).
class SheafifyCache {
 public:
  explicit SheafifyCache(const PowerContext& pc) : pc_(pc) {}

  const SheafificationResult& get(PshPtr x) const;
  NatTrans map(const NatTrans& f) const;       // a(f)

 private:
  const PowerContext& pc_;
  mutable std::mutex mu_;
  mutable std::map<const Presheaf*, std::pair<PshPtr, SheafificationResult>>
      cache_;
};

}  // namespace finsite
