// The subobject Heyting algebra of the ambient presheaf category and a
// compositional evaluator for its internal language.
#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "finsite/fincat.hpp"

namespace finsite {

// Lattice operations. Same-parent preconditions are checked.
Subpresheaf sub_meet(const Subpresheaf& s, const Subpresheaf& t);
Subpresheaf sub_join(const Subpresheaf& s, const Subpresheaf& t);

// Heyting implication:
// (s⇒t)(a) = { x | ∀φ: b→a, X(φ)x ∈ s(b) implies X(φ)x ∈ t(b) }.
Subpresheaf sub_implies(const Subpresheaf& s, const Subpresheaf& t);
Subpresheaf sub_not(const Subpresheaf& s);

// Inverse image along f: X → Y of t ≤ Y.
Subpresheaf pullback_sub(const NatTrans& f, const Subpresheaf& t);

// Direct image ∃_f and dual image ∀_f along f: X → Y of s ≤ X:
//   ∃_f(s)(a) = { f_a(x) | x ∈ s(a) }
//   ∀_f(s)(a) = { y | ∀φ: b→a, ∀x ∈ X(b): f_b(x) = Y(φ)y implies x ∈ s(b) }.
Subpresheaf exists_along(const NatTrans& f, const Subpresheaf& s);
Subpresheaf forall_along(const NatTrans& f, const Subpresheaf& s);

// Kernel pair of f as a subobject of X×X; the caller supplies the product.
Subpresheaf kernel_pair(const Product& xx, const NatTrans& f);
// Graph of f: X → A as a subobject of A×X (family over A).
Subpresheaf graph(const Product& ax, const NatTrans& f);
Subpresheaf diagonal(const Product& xx);

// --- Internal language ------------------------------------------------
//
// Sorts are presheaves; atoms are subpresheaves of the product of the
// argument sorts (in argument order, built with make_product). Terms are
// variables and applications of maps. A membership atom is an atom whose
// relation lives on (set-sort × element-sort), the layout produced by the
// power-object module.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  // Var: de-Bruijn-free named variable; App: f applied to the argument.
  struct Var {
    std::string name;
  };
  struct App {
    NatTrans f;
    TermPtr arg;
  };
  std::variant<Var, App> node;
};

TermPtr var(std::string name);
TermPtr app(NatTrans f, TermPtr arg);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  struct Top {};
  struct Bottom {};
  struct And {
    FormulaPtr l, r;
  };
  struct Or {
    FormulaPtr l, r;
  };
  struct Implies {
    FormulaPtr l, r;
  };
  struct Not {
    FormulaPtr f;
  };
  struct Equals {
    TermPtr l, r;
  };
  struct Atom {
    Subpresheaf rel;      // parent must be the product of the arg sorts
    std::vector<TermPtr> args;
  };
  struct Quant {
    bool universal = true;
    std::string var;
    PshPtr sort;
    FormulaPtr body;
  };
  std::variant<Top, Bottom, And, Or, Implies, Not, Equals, Atom, Quant> node;
};

FormulaPtr f_top();
FormulaPtr f_bottom();
FormulaPtr f_and(FormulaPtr l, FormulaPtr r);
FormulaPtr f_or(FormulaPtr l, FormulaPtr r);
FormulaPtr f_implies(FormulaPtr l, FormulaPtr r);
FormulaPtr f_iff(FormulaPtr l, FormulaPtr r);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_equals(TermPtr l, TermPtr r);
FormulaPtr f_atom(Subpresheaf rel, std::vector<TermPtr> args);
FormulaPtr f_forall(std::string v, PshPtr sort, FormulaPtr body);
FormulaPtr f_exists(std::string v, PshPtr sort, FormulaPtr body);
// Membership atom (elem ∈ set) against an explicit relation on set×elem.
FormulaPtr f_member(TermPtr elem, TermPtr set, Subpresheaf rel);
// Restricted quantifiers, as sugar:
//   (∀x∈s)φ = (∀x:X)(x∈s ⇒ φ),  (∃x∈s)φ = (∃x:X)(x∈s ∧ φ).
FormulaPtr f_forall_in(std::string v, PshPtr sort, TermPtr set,
                       Subpresheaf member_rel, FormulaPtr body);
FormulaPtr f_exists_in(std::string v, PshPtr sort, TermPtr set,
                       Subpresheaf member_rel, FormulaPtr body);

// A context is an ordered list of typed variables. Evaluation yields a
// subobject of the context product; a closed formula is valid iff its
// value at the empty context is the full subobject of the terminal.
struct Context {
  CatPtr cat;
  std::vector<std::pair<std::string, PshPtr>> vars;
};

Subpresheaf evaluate(const Context& ctx, const FormulaPtr& phi);
bool is_valid(CatPtr cat, const FormulaPtr& phi);

}  // namespace finsite
