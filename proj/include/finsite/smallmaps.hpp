// Pluggable small-map families, the brute-force axiom harness over a
// finite universe, and the sheaf-level instantiation where the family is
// the locally small maps, epis are dense maps, and quasi-pullbacks are
// local quasi-pullbacks.
#pragma once

#include <functional>
#include <string>

#include "finsite/sheafify.hpp"

namespace finsite {

// The finite arena the axiom quantifiers range over.
struct Universe {
  CatPtr cat;
  std::vector<PshPtr> objects;
  std::vector<NatTrans> maps;
  std::vector<std::pair<int, int>> endpoints;   // (src, dst) object indices
};

// All presheaves with carriers ≤ max_card and all maps among them.
Universe auto_universe(CatPtr cat, int max_card);
// The same, restricted to sheaves for the given coverage.
Universe sheaf_universe(const ClosureContext& ctx, int max_card);
Universe universe_from_objects(CatPtr cat, std::vector<PshPtr> objects);

struct MapFamily {
  std::string name = "all";
  bool all = true;
  std::vector<NatTrans> listed;

  // `all` admits everything. A user list admits maps equal to a listed one
  // up to isomorphism of arrows.
  bool contains(const NatTrans& f) const;
};

enum class Status {
  Verified,
  Counterexample,
  UnknownWithinBounds,
  WitnessFound,
  NoneInUniverse,
  Skipped,
};

std::string status_name(Status s);

struct AxiomResult {
  std::string axiom;
  Status status = Status::Verified;
  std::string detail;
  int checked = 0;
  int skipped = 0;
};

struct HarnessOptions {
  int pair_cap = 20000;          // cap on quadratic instance loops
  long long s2_budget = 50'000'000;  // rough step budget for the S2 search
  int power_stage_cap = 16;
};

// The notions the axioms are stated in. The ambient instantiation uses
// pointwise epis and epi-comparison quasi-pullbacks; the sheaf
// instantiation swaps in dense maps and dense-comparison squares, and
// reflects colimit constructions through the associated sheaf functor.
struct Notions {
  std::string label;
  std::function<bool(const NatTrans&)> family;
  std::function<bool(const NatTrans&)> epi;
  std::function<bool(const Square&)> quasi_pullback;
  std::function<NatTrans(const NatTrans&)> reflect_arrow;
  bool pointwise_comparison = true;   // enables the S2 fiber prefilter
};

Notions ambient_notions(const MapFamily& fam);
Notions sheaf_notions(const PowerContext& pc, const SheafifyCache& sh);

// (A1)–(A7), each checked by exhaustion over the universe; (A7) reports
// unknown-within-bounds when no witness is found.
std::vector<AxiomResult> check_axioms(const Universe& u, const Notions& n,
                                      const HarnessOptions& opt = {});

// (P1) over the universe: for each X, the pullback functions
// hom(A, P(X)) → (admitted families over A) are bijections.
AxiomResult check_p1(const Universe& u, const MapFamily& fam,
                     const HarnessOptions& opt = {});

// Bounded search for a weakly representing map. Finding none is reported
// as none-in-universe, which is not a refutation.
AxiomResult check_s2_bounded(const Universe& u, const Notions& n,
                             const HarnessOptions& opt = {});

// The sheaf-level harness: axioms with the sheaf notions, the P_J
// classification in place of (P1), and instance checks of the supporting
// lemmas (unit squares are local quasi-pullbacks, composites and
// dense-quotients of locally small maps, sheaf collection, locality of
// local smallness, and sheafification sending maps to locally small maps).
std::vector<AxiomResult> check_sheaf_small_maps(const PowerContext& pc,
                                                const Universe& sheaf_u,
                                                const Universe& ambient_u,
                                                const HarnessOptions& opt = {});

}  // namespace finsite
