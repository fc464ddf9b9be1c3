// Power objects, membership relations, classifying maps, the quotient by
// equal closure, and classification of locally small closed subobjects.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "finsite/closure.hpp"
#include "finsite/fincat.hpp"
#include "finsite/logic.hpp"

namespace finsite {

// P(X): the carrier at a lists every subpresheaf of 𝐲(a)×X in a canonical
// order; the action along φ: b→a restricts relations. With the all-maps
// smallness family every relation is admitted.
struct PowerObjectResult {
  PshPtr base;                                    // X
  PshPtr psh;                                     // P(X)
  std::vector<Product> yx;                        // per object: 𝐲(a)×X
  std::vector<std::vector<Subpresheaf>> relations;
  Product prod;                                   // P(X)×X
  Subpresheaf membership;                         // ∋ ⊆ P(X)×X

  int index_of_relation(int a, const Subpresheaf& r) const;
};

using PowerPtr = std::shared_ptr<const PowerObjectResult>;

// Builds P(X). Throws ResourceError naming the first stage whose
// 𝐲(a)×X has more than stage_cap elements in total.
PowerPtr power_object(PshPtr x, int stage_cap = 16);

// χ_S: A → P(X) for an indexed family S ⊆ A×X over A:
// χ_S(a)(ψ: b→c, x) holds iff (A(ψ)a, x) ∈ S(b).
NatTrans classify(const Product& ax, const Subpresheaf& s,
                  const PowerObjectResult& po);

// Direct image f_! : P(X) → P(Y) and inverse image f^* : P(Y) → P(X)
// along f : X → Y, acting on relations pointwise.
NatTrans power_direct_image(const PowerObjectResult& px,
                            const PowerObjectResult& py, const NatTrans& f);
NatTrans power_inverse_image(const PowerObjectResult& py,
                             const PowerObjectResult& px, const NatTrans& f);

// P_J(X): carrier = the closed relations, i.e. canonical representatives
// of the classes of "equal closure". The quotient map sends a relation to
// its closure.
struct PJObjectResult {
  PshPtr base;
  PowerPtr power;
  PshPtr psh;                                     // P_J(X)
  std::vector<std::vector<int>> closed;           // indices into power carrier
  NatTrans quotient;                              // P(X) ↠ P_J(X)
  Product prod;                                   // P_J(X)×X
  Subpresheaf membership;                         // ∋_J

  const Subpresheaf& relation_of(int a, int j) const {
    return power->relations[a][closed[a][j]];
  }
};

using PJPtr = std::shared_ptr<const PJObjectResult>;

PJPtr pj_object(const ClosureContext& ctx, PowerPtr po);

// φ_S: A → P_J(X) for a closed indexed family; rejects non-closed input
// naming a witness element.
NatTrans classify_closed(const ClosureContext& ctx, const Product& ax,
                         const Subpresheaf& s, const PJObjectResult& pj);

// Shared cache of power objects and P_J objects for one site.
class PowerContext {
 public:
  PowerContext(const ClosureContext& ctx, int stage_cap = 16)
      : ctx_(ctx), cap_(stage_cap) {}

  const ClosureContext& closure() const { return ctx_; }
  int stage_cap() const { return cap_; }
  PowerPtr power(PshPtr x) const;
  PJPtr pj(PshPtr x) const;

 private:
  const ClosureContext& ctx_;
  int cap_;
  mutable std::mutex mu_;
  mutable std::map<const Presheaf*, std::pair<PshPtr, PowerPtr>> power_;
  mutable std::map<const Presheaf*, std::pair<PshPtr, PJPtr>> pj_;
};

// Decides the internal sentence characterising locally small maps:
//   (∀a:A)(∃s:PX)(∀x:X)((x ∈ s ⇒ f(x)=a) ∧ (f(x)=a ⇒ x ∈̄ s)).
bool is_locally_small(const PowerContext& pc, const NatTrans& f);

// The closed-small variant: (∀a:A)(∃s:PX)(∀x:X)(f(x)=a ⇔ x ∈̄ s).
// Kept as a predicate for comparison experiments only.
bool is_closed_small(const PowerContext& pc, const NatTrans& f);

// Diagrammatic form of local smallness: bounded search for a witness
// (B ∈ candidates, epi h: B ↠ A, family T ⊆ B×X) with T ↣ B×_A X dense
// and the composite T → B admitted by the smallness predicate.
bool is_locally_small_diagrammatic(
    const PowerContext& pc, const NatTrans& f,
    const std::vector<PshPtr>& candidates,
    const std::function<bool(const NatTrans&)>& admit = {});

}  // namespace finsite
