// The universal closure operator induced by a coverage, dense monos and
// maps, the small-dense factorisation, and local quasi-pullbacks.
#pragma once

#include <map>
#include <mutex>

#include "finsite/fincat.hpp"
#include "finsite/site.hpp"

namespace finsite {

class ClosureContext {
 public:
  explicit ClosureContext(Coverage j) : j_(std::move(j)) {}

  const Coverage& coverage() const { return j_; }
  CatPtr cat() const { return j_.omega->cat; }

  // C(S)(a) = { x ∈ X(a) | { φ: b→a | X(φ)x ∈ S(b) } ∈ J(a) }.
  // Memoised on (parent, selection); the memo is behaviourally transparent.
  Subpresheaf close(const Subpresheaf& s) const;

  // The sieve of morphisms pulling x into S, the heart of the closure.
  Sieve membership_sieve(const Subpresheaf& s, int a, int x) const;

  bool is_closed(const Subpresheaf& s) const;
  bool is_dense_mono(const Subpresheaf& s) const;
  // A map is dense when it factors as an epi followed by a dense mono.
  bool is_dense_map(const NatTrans& f) const;

 private:
  Coverage j_;
  struct KeyLess {
    bool operator()(const std::pair<PshPtr, std::vector<std::vector<bool>>>& a,
                    const std::pair<PshPtr, std::vector<std::vector<bool>>>& b)
        const {
      if (a.first.get() != b.first.get()) return a.first.get() < b.first.get();
      return a.second < b.second;
    }
  };
  mutable std::mutex mu_;
  mutable std::map<std::pair<PshPtr, std::vector<std::vector<bool>>>,
                   std::vector<std::vector<bool>>, KeyLess>
      memo_;
};

// Factorisation of a dense mono B ↣ A through
//   B′(c) = { (p, a) | p ∈ J(c), a ∈ A(c), ∀φ ∈ p: A(φ)a ∈ B(dom φ) }
// as a dense mono b ↦ (⊤, b) followed by the projection onto A, which is
// an epi exactly because B is dense.
struct SmallDenseFactorization {
  ReifiedSub domain;                    // B reified
  PshPtr bprime;
  std::vector<std::vector<std::pair<Sieve, int>>> elems;  // per object
  NatTrans mono;                        // B ↣ B′
  NatTrans epi;                         // B′ ↠ A
};

SmallDenseFactorization small_dense_factorization(const ClosureContext& ctx,
                                                  const Subpresheaf& dense_mono);

// A commutative square, read as: right∘top = bottom∘left.
struct Square {
  NatTrans top;      // Y → X
  NatTrans left;     // Y → B
  NatTrans bottom;   // B → A
  NatTrans right;    // X → A
};

bool square_commutes(const Square& sq);

// Canonical comparison Y → B×_A X of a commutative square.
NatTrans pullback_comparison(const Square& sq, const LimitResult& pb);

// True when the comparison into the actual pullback is a dense map.
bool is_local_quasi_pullback(const ClosureContext& ctx, const Square& sq);

// True when the comparison is an epi (quasi-pullback in the ambient sense).
bool is_quasi_pullback(const Square& sq);

// True when the comparison is an iso.
bool is_pullback_square(const Square& sq);

}  // namespace finsite
