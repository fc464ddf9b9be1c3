// Finite categories, presheaves of finite sets, natural transformations,
// and the pointwise (co)limit toolkit of the ambient pretopos.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsite {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a size guard trips (power-object stages are
// double-exponential; the guards are the real constraint).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite category presented by a composition table. Morphisms carry
// explicit dom/cod; table[g][f] = g∘f whenever cod(f) == dom(g), else -1.
struct FinCategory {
  struct Morphism {
    int dom = 0;
    int cod = 0;
    std::string name;
    bool operator==(const Morphism&) const = default;
  };

  std::vector<std::string> object_names;
  std::vector<Morphism> morphisms;
  std::vector<int> identity;               // per object
  std::vector<std::vector<int>> table;     // table[g][f] = g∘f or -1

  int num_objects() const { return static_cast<int>(object_names.size()); }
  int num_morphisms() const { return static_cast<int>(morphisms.size()); }
  int dom(int m) const { return morphisms[m].dom; }
  int cod(int m) const { return morphisms[m].cod; }

  // g ∘ f, with f applied first. Requires cod(f) == dom(g).
  int compose(int g, int f) const { return table[g][f]; }

  std::vector<int> hom_into(int a) const;          // all φ with cod(φ)=a
  std::vector<int> hom(int b, int a) const;        // all φ: b → a

  bool operator==(const FinCategory&) const = default;
};

using CatPtr = std::shared_ptr<const FinCategory>;

// Structural check: identity laws and associativity by exhaustion.
// Returns one line per violation; empty iff the tables present a category.
// Out-of-range indices throw InputError instead (malformed input is not a
// law violation).
std::vector<std::string> validate_category(const FinCategory& c);

// Canned categories used throughout the test corpus and the DSL shorthands.
FinCategory make_terminal_category();
FinCategory make_poset_category(int n_objects,
                                const std::vector<std::pair<int, int>>& le);
FinCategory make_monoid_category(const std::vector<std::string>& elements,
                                 int identity_index,
                                 const std::vector<std::vector<int>>& mult);

// A presheaf of finite sets on c: carrier X(a) = {0,…,card[a]-1} and, for
// φ: b→a, a total map action[φ]: X(a) → X(b). Contravariance convention:
// the action of φ goes from the carrier at cod(φ) to the carrier at dom(φ).
struct Presheaf {
  CatPtr cat;
  std::vector<int> card;
  std::vector<std::vector<int>> action;

  int act(int m, int x) const { return action[m][x]; }
  int total_elements() const;

  bool operator==(const Presheaf& o) const {
    return card == o.card && action == o.action &&
           (cat == o.cat || (cat && o.cat && *cat == *o.cat));
  }
};

using PshPtr = std::shared_ptr<const Presheaf>;

std::vector<std::string> validate_presheaf(const Presheaf& x);

PshPtr make_presheaf(CatPtr cat, std::vector<int> card,
                     std::vector<std::vector<int>> action);
PshPtr terminal_presheaf(CatPtr cat);
PshPtr initial_presheaf(CatPtr cat);
PshPtr constant_presheaf(CatPtr cat, int n);

// 𝐲(a): carrier at b is hom(b,a) in the order of hom(); action along
// ψ: c→b is precomposition φ ↦ φ∘ψ.
PshPtr yoneda(CatPtr cat, int a);

// Element index of φ: b→a inside the carrier 𝐲(a)(b).
int yoneda_index(const FinCategory& c, int a, int phi);

struct NatTrans {
  PshPtr src, dst;
  std::vector<std::vector<int>> comp;      // comp[a]: X(a) → Y(a)

  int at(int a, int x) const { return comp[a][x]; }
  bool operator==(const NatTrans& o) const {
    return comp == o.comp && *src == *o.src && *dst == *o.dst;
  }
};

bool is_natural(const NatTrans& f);
NatTrans identity_nat(PshPtr x);
NatTrans compose(const NatTrans& g, const NatTrans& f);   // g ∘ f
bool is_mono(const NatTrans& f);    // pointwise injective
bool is_epi(const NatTrans& f);     // pointwise surjective
bool is_iso(const NatTrans& f);
NatTrans inverse(const NatTrans& f);

// All natural transformations X → Y, in a deterministic order. `partial`
// (if nonempty) pins components: partial[a][x] = -1 for free, else forced.
// Stops early once `limit` maps are found (0 = no limit).
std::vector<NatTrans> enumerate_nat_trans(
    PshPtr x, PshPtr y,
    const std::vector<std::vector<int>>& partial = {},
    std::size_t limit = 0);

// Backtracking search for a natural isomorphism X → Y subject to optional
// pinned components; nullopt when none exists.
std::optional<NatTrans> find_iso(
    PshPtr x, PshPtr y,
    const std::vector<std::vector<int>>& partial = {});

// Product of finitely many presheaves with mixed-radix tuple indexing
// (first factor varies slowest). Empty factor list gives the terminal.
struct Product {
  PshPtr psh;
  std::vector<PshPtr> factors;

  int tuple_index(int a, const std::vector<int>& coords) const;
  std::vector<int> coords(int a, int idx) const;
  NatTrans projection(int i) const;
};

Product make_product(CatPtr cat, std::vector<PshPtr> factors);

// Tupling ⟨fs…⟩: A → ΠXi of maps with common source into the factors.
NatTrans tuple_map(const Product& p, const std::vector<NatTrans>& fs);

// A finite diagram of presheaves: a graph shape plus optional declared
// commutativity equations (pairs of arrow paths, composites must agree).
struct PresheafDiagram {
  struct Arrow {
    int src = 0, dst = 0;
    NatTrans t;
  };
  std::vector<PshPtr> nodes;
  std::vector<Arrow> arrows;
  // Each equation is a pair of paths; a path is a list of arrow indices
  // composed left-to-right (path[0] applied first). Paths must share
  // endpoints.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> equations;
};

bool diagram_commutes(const PresheafDiagram& d);

struct LimitResult {
  PshPtr apex;
  std::vector<NatTrans> projections;   // one per node
};
struct ColimitResult {
  PshPtr apex;
  std::vector<NatTrans> injections;    // one per node
};

// Pointwise limit: tuples satisfying every arrow's cone equation.
LimitResult limit(const PresheafDiagram& d);
// Pointwise colimit: disjoint union modulo the equivalence closure of the
// relation generated by the arrows.
ColimitResult colimit(const PresheafDiagram& d);

LimitResult binary_product(PshPtr x, PshPtr y);
LimitResult equalizer(const NatTrans& f, const NatTrans& g);
LimitResult pullback(const NatTrans& f, const NatTrans& g);  // along common target
ColimitResult binary_coproduct(PshPtr x, PshPtr y);
ColimitResult coequalizer(const NatTrans& f, const NatTrans& g);

// A subobject of a presheaf: one flag per element, stable under the
// restriction maps. sel[a].size() == parent->card[a].
struct Subpresheaf {
  PshPtr parent;
  std::vector<std::vector<bool>> sel;

  bool has(int a, int x) const { return sel[a][x]; }
  int count() const;
  bool operator==(const Subpresheaf& o) const {
    return sel == o.sel && *parent == *o.parent;
  }
  bool subset_of(const Subpresheaf& o) const;
};

bool is_restriction_stable(const Subpresheaf& s);
Subpresheaf full_sub(PshPtr x);
Subpresheaf empty_sub(PshPtr x);

// Reified subobject: a presheaf whose carrier at a lists the selected
// elements of X(a) in index order, plus the inclusion into X.
struct ReifiedSub {
  PshPtr psh;
  NatTrans incl;
  std::vector<std::vector<int>> elems;   // elems[a][i] = parent index
};
ReifiedSub sub_to_presheaf(const Subpresheaf& s);

// All restriction-stable subobjects of X, deterministically ordered.
std::vector<Subpresheaf> enumerate_subobjects(PshPtr x);

// Pointwise quotient by an equivalence relation r ⊆ X×X (r.parent must be
// the product prod). Rejects non-equivalence relations, naming a failing
// pair. Carrier elements are the minimal representatives, in order.
struct QuotientResult {
  PshPtr psh;
  NatTrans proj;
};
QuotientResult quotient_by_equivalence(const Product& prod,
                                       const Subpresheaf& r);

// Epi-mono factorisation through the pointwise image.
struct ImageFactorization {
  NatTrans epi;          // X ↠ image presheaf
  Subpresheaf image;     // image as subobject of the target
  NatTrans mono;         // image presheaf ↣ Y
};
ImageFactorization image_factorization(const NatTrans& f);

// All presheaves on c with every carrier of size ≤ max_card,
// deterministically ordered. The arena for the axiom-harness universes.
std::vector<PshPtr> enumerate_presheaves(CatPtr cat, int max_card);

}  // namespace finsite
