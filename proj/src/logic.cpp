#include "finsite/logic.hpp"

#include <algorithm>

namespace finsite {

namespace {

void require_same_parent(const Subpresheaf& s, const Subpresheaf& t,
                         const char* op) {
  if (!(*s.parent == *t.parent))
    throw InputError(std::string(op) + ": subobjects have different parents");
}

}  // namespace

Subpresheaf sub_meet(const Subpresheaf& s, const Subpresheaf& t) {
  require_same_parent(s, t, "meet");
  Subpresheaf r = s;
  for (std::size_t a = 0; a < r.sel.size(); ++a)
    for (std::size_t x = 0; x < r.sel[a].size(); ++x)
      r.sel[a][x] = s.sel[a][x] && t.sel[a][x];
  return r;
}

Subpresheaf sub_join(const Subpresheaf& s, const Subpresheaf& t) {
  require_same_parent(s, t, "join");
  Subpresheaf r = s;
  for (std::size_t a = 0; a < r.sel.size(); ++a)
    for (std::size_t x = 0; x < r.sel[a].size(); ++x)
      r.sel[a][x] = s.sel[a][x] || t.sel[a][x];
  return r;
}

Subpresheaf sub_implies(const Subpresheaf& s, const Subpresheaf& t) {
  require_same_parent(s, t, "implication");
  const Presheaf& x = *s.parent;
  const FinCategory& c = *x.cat;
  Subpresheaf r = full_sub(s.parent);
  for (int a = 0; a < c.num_objects(); ++a)
    for (int e = 0; e < x.card[a]; ++e) {
      bool ok = true;
      for (int m = 0; m < c.num_morphisms() && ok; ++m) {
        if (c.cod(m) != a) continue;
        int img = x.act(m, e);
        if (s.sel[c.dom(m)][img] && !t.sel[c.dom(m)][img]) ok = false;
      }
      r.sel[a][e] = ok;
    }
  return r;
}

Subpresheaf sub_not(const Subpresheaf& s) {
  return sub_implies(s, empty_sub(s.parent));
}

Subpresheaf pullback_sub(const NatTrans& f, const Subpresheaf& t) {
  if (!(*t.parent == *f.dst))
    throw InputError("pullback_sub: subobject not of the map's target");
  Subpresheaf r = empty_sub(f.src);
  for (std::size_t a = 0; a < r.sel.size(); ++a)
    for (std::size_t x = 0; x < r.sel[a].size(); ++x)
      r.sel[a][x] = t.sel[a][f.comp[a][x]];
  return r;
}

Subpresheaf exists_along(const NatTrans& f, const Subpresheaf& s) {
  if (!(*s.parent == *f.src))
    throw InputError("exists_along: subobject not of the map's source");
  Subpresheaf r = empty_sub(f.dst);
  for (std::size_t a = 0; a < s.sel.size(); ++a)
    for (std::size_t x = 0; x < s.sel[a].size(); ++x)
      if (s.sel[a][x]) r.sel[a][f.comp[a][x]] = true;
  return r;
}

Subpresheaf forall_along(const NatTrans& f, const Subpresheaf& s) {
  if (!(*s.parent == *f.src))
    throw InputError("forall_along: subobject not of the map's source");
  const Presheaf& y = *f.dst;
  const FinCategory& c = *y.cat;
  Subpresheaf r = empty_sub(f.dst);
  for (int a = 0; a < c.num_objects(); ++a)
    for (int e = 0; e < y.card[a]; ++e) {
      bool ok = true;
      for (int m = 0; m < c.num_morphisms() && ok; ++m) {
        if (c.cod(m) != a) continue;
        int b = c.dom(m);
        int ye = y.act(m, e);
        for (int x = 0; x < f.src->card[b] && ok; ++x)
          if (f.comp[b][x] == ye && !s.sel[b][x]) ok = false;
      }
      r.sel[a][e] = ok;
    }
  return r;
}

Subpresheaf kernel_pair(const Product& xx, const NatTrans& f) {
  Subpresheaf r = empty_sub(xx.psh);
  const FinCategory& c = *f.src->cat;
  for (int a = 0; a < c.num_objects(); ++a)
    for (int e = 0; e < xx.psh->card[a]; ++e) {
      auto cs = xx.coords(a, e);
      r.sel[a][e] = f.at(a, cs[0]) == f.at(a, cs[1]);
    }
  return r;
}

Subpresheaf graph(const Product& ax, const NatTrans& f) {
  Subpresheaf r = empty_sub(ax.psh);
  const FinCategory& c = *f.src->cat;
  for (int a = 0; a < c.num_objects(); ++a)
    for (int e = 0; e < ax.psh->card[a]; ++e) {
      auto cs = ax.coords(a, e);
      r.sel[a][e] = f.at(a, cs[1]) == cs[0];
    }
  return r;
}

Subpresheaf diagonal(const Product& xx) {
  Subpresheaf r = empty_sub(xx.psh);
  for (std::size_t a = 0; a < r.sel.size(); ++a)
    for (std::size_t e = 0; e < r.sel[a].size(); ++e) {
      auto cs = xx.coords(static_cast<int>(a), static_cast<int>(e));
      r.sel[a][e] = cs[0] == cs[1];
    }
  return r;
}

TermPtr var(std::string name) {
  return std::make_shared<Term>(Term{Term::Var{std::move(name)}});
}

TermPtr app(NatTrans f, TermPtr arg) {
  return std::make_shared<Term>(Term{Term::App{std::move(f), std::move(arg)}});
}

FormulaPtr f_top() { return std::make_shared<Formula>(Formula{Formula::Top{}}); }
FormulaPtr f_bottom() {
  return std::make_shared<Formula>(Formula{Formula::Bottom{}});
}
FormulaPtr f_and(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::And{std::move(l), std::move(r)}});
}
FormulaPtr f_or(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::Or{std::move(l), std::move(r)}});
}
FormulaPtr f_implies(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::Implies{std::move(l), std::move(r)}});
}
FormulaPtr f_iff(FormulaPtr l, FormulaPtr r) {
  return f_and(f_implies(l, r), f_implies(r, l));
}
FormulaPtr f_not(FormulaPtr f) {
  return std::make_shared<Formula>(Formula{Formula::Not{std::move(f)}});
}
FormulaPtr f_equals(TermPtr l, TermPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::Equals{std::move(l), std::move(r)}});
}
FormulaPtr f_atom(Subpresheaf rel, std::vector<TermPtr> args) {
  return std::make_shared<Formula>(
      Formula{Formula::Atom{std::move(rel), std::move(args)}});
}
FormulaPtr f_forall(std::string v, PshPtr sort, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Formula::Quant{true, std::move(v), std::move(sort),
                             std::move(body)}});
}
FormulaPtr f_exists(std::string v, PshPtr sort, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Formula::Quant{false, std::move(v), std::move(sort),
                             std::move(body)}});
}
FormulaPtr f_member(TermPtr elem, TermPtr set, Subpresheaf rel) {
  return f_atom(std::move(rel), {std::move(set), std::move(elem)});
}
FormulaPtr f_forall_in(std::string v, PshPtr sort, TermPtr set,
                       Subpresheaf member_rel, FormulaPtr body) {
  FormulaPtr in = f_member(var(v), std::move(set), std::move(member_rel));
  return f_forall(std::move(v), std::move(sort),
                  f_implies(std::move(in), std::move(body)));
}
FormulaPtr f_exists_in(std::string v, PshPtr sort, TermPtr set,
                       Subpresheaf member_rel, FormulaPtr body) {
  FormulaPtr in = f_member(var(v), std::move(set), std::move(member_rel));
  return f_exists(std::move(v), std::move(sort),
                  f_and(std::move(in), std::move(body)));
}

namespace {

// Evaluation works over the product of the context sorts, built fresh at
// each quantifier. Terms denote maps from the context product to their
// sort, computed pointwise through the coordinate projections.
struct Evaluator {
  const Context& ctx;
  Product prod;

  explicit Evaluator(const Context& c)
      : ctx(c), prod([&] {
          std::vector<PshPtr> sorts;
          for (auto& [_, s] : c.vars) sorts.push_back(s);
          return make_product(c.cat, std::move(sorts));
        }()) {}

  int var_index(const std::string& name) const {
    for (std::size_t i = ctx.vars.size(); i-- > 0;)
      if (ctx.vars[i].first == name) return static_cast<int>(i);
    throw InputError("unbound variable: " + name);
  }

  // The denotation of a term: per object, a map ctx-product → sort-carrier,
  // together with the sort for checking.
  struct TermVal {
    PshPtr sort;
    std::vector<std::vector<int>> map;   // map[a][ctx element] = sort element
  };

  TermVal eval_term(const TermPtr& t) const {
    if (auto* v = std::get_if<Term::Var>(&t->node)) {
      int i = var_index(v->name);
      NatTrans pr = prod.projection(i);
      return {ctx.vars[i].second, pr.comp};
    }
    const auto& ap = std::get<Term::App>(t->node);
    TermVal arg = eval_term(ap.arg);
    if (!(*ap.f.src == *arg.sort))
      throw InputError("ill-sorted application");
    TermVal out;
    out.sort = ap.f.dst;
    out.map.resize(arg.map.size());
    for (std::size_t a = 0; a < arg.map.size(); ++a) {
      out.map[a].resize(arg.map[a].size());
      for (std::size_t e = 0; e < arg.map[a].size(); ++e)
        out.map[a][e] = ap.f.comp[a][arg.map[a][e]];
    }
    return out;
  }

  Subpresheaf eval(const FormulaPtr& phi) const {
    const Formula& f = *phi;
    if (std::holds_alternative<Formula::Top>(f.node))
      return full_sub(prod.psh);
    if (std::holds_alternative<Formula::Bottom>(f.node))
      return empty_sub(prod.psh);
    if (auto* n = std::get_if<Formula::And>(&f.node))
      return sub_meet(eval(n->l), eval(n->r));
    if (auto* n = std::get_if<Formula::Or>(&f.node))
      return sub_join(eval(n->l), eval(n->r));
    if (auto* n = std::get_if<Formula::Implies>(&f.node))
      return sub_implies(eval(n->l), eval(n->r));
    if (auto* n = std::get_if<Formula::Not>(&f.node))
      return sub_not(eval(n->f));
    if (auto* n = std::get_if<Formula::Equals>(&f.node)) {
      TermVal l = eval_term(n->l), r = eval_term(n->r);
      if (!(*l.sort == *r.sort))
        throw InputError("equality between different sorts");
      Subpresheaf s = empty_sub(prod.psh);
      for (std::size_t a = 0; a < s.sel.size(); ++a)
        for (std::size_t e = 0; e < s.sel[a].size(); ++e)
          s.sel[a][e] = l.map[a][e] == r.map[a][e];
      return s;
    }
    if (auto* n = std::get_if<Formula::Atom>(&f.node)) {
      std::vector<TermVal> args;
      args.reserve(n->args.size());
      for (auto& t : n->args) args.push_back(eval_term(t));
      std::vector<PshPtr> sorts;
      for (auto& a : args) sorts.push_back(a.sort);
      Product rel_prod = make_product(ctx.cat, sorts);
      if (!(*n->rel.parent == *rel_prod.psh))
        throw InputError("atom relation parent does not match argument sorts");
      Subpresheaf s = empty_sub(prod.psh);
      for (std::size_t a = 0; a < s.sel.size(); ++a)
        for (std::size_t e = 0; e < s.sel[a].size(); ++e) {
          std::vector<int> cs(args.size());
          for (std::size_t i = 0; i < args.size(); ++i)
            cs[i] = args[i].map[a][e];
          s.sel[a][e] =
              n->rel.sel[a][rel_prod.tuple_index(static_cast<int>(a), cs)];
        }
      return s;
    }
    const auto& q = std::get<Formula::Quant>(f.node);
    Context inner = ctx;
    inner.vars.emplace_back(q.var, q.sort);
    Evaluator ev(inner);
    Subpresheaf body = ev.eval(q.body);
    // Quantify along the projection that forgets the new last coordinate.
    NatTrans proj;
    proj.src = ev.prod.psh;
    proj.dst = prod.psh;
    proj.comp.resize(prod.psh->card.size());
    for (std::size_t a = 0; a < proj.comp.size(); ++a) {
      proj.comp[a].resize(ev.prod.psh->card[a]);
      for (int e = 0; e < ev.prod.psh->card[a]; ++e) {
        auto cs = ev.prod.coords(static_cast<int>(a), e);
        cs.pop_back();
        proj.comp[a][e] = prod.tuple_index(static_cast<int>(a), cs);
      }
    }
    return q.universal ? forall_along(proj, body) : exists_along(proj, body);
  }
};

}  // namespace

Subpresheaf evaluate(const Context& ctx, const FormulaPtr& phi) {
  return Evaluator(ctx).eval(phi);
}

bool is_valid(CatPtr cat, const FormulaPtr& phi) {
  Context ctx{std::move(cat), {}};
  Subpresheaf v = evaluate(ctx, phi);
  return v == full_sub(v.parent);
}

}  // namespace finsite
