#include "finsite/powerobj.hpp"

#include <algorithm>

namespace finsite {

int PowerObjectResult::index_of_relation(int a, const Subpresheaf& r) const {
  const auto& v = relations[a];
  auto it = std::lower_bound(
      v.begin(), v.end(), r,
      [](const Subpresheaf& x, const Subpresheaf& y) { return x.sel < y.sel; });
  if (it == v.end() || !(it->sel == r.sel))
    throw InputError("relation not found in power-object carrier");
  return static_cast<int>(it - v.begin());
}

PowerPtr power_object(PshPtr x, int stage_cap) {
  CatPtr cat = x->cat;
  const FinCategory& c = *cat;
  auto po = std::make_shared<PowerObjectResult>();
  po->base = x;
  po->yx.reserve(c.num_objects());
  po->relations.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    po->yx.push_back(make_product(cat, {yoneda(cat, a), x}));
    int total = po->yx[a].psh->total_elements();
    if (total > stage_cap)
      throw ResourceError("power object stage at object " +
                          c.object_names[a] + " has " + std::to_string(total) +
                          " elements, over the cap of " +
                          std::to_string(stage_cap));
    po->relations[a] = enumerate_subobjects(po->yx[a].psh);
    std::sort(po->relations[a].begin(), po->relations[a].end(),
              [](const Subpresheaf& p, const Subpresheaf& q) {
                return p.sel < q.sel;
              });
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(po->relations[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      const Subpresheaf& r = po->relations[from][i];
      // R·φ at stage b: (ψ: b→to, x) selected iff (φ∘ψ, x) ∈ R.
      Subpresheaf rr = empty_sub(po->yx[to].psh);
      for (int b = 0; b < c.num_objects(); ++b) {
        auto homs = c.hom(b, to);
        for (std::size_t pi = 0; pi < homs.size(); ++pi)
          for (int xe = 0; xe < x->card[b]; ++xe) {
            int composite = c.compose(m, homs[pi]);
            int src_idx = po->yx[from].tuple_index(
                b, {yoneda_index(c, from, composite), xe});
            if (r.sel[b][src_idx])
              rr.sel[b][po->yx[to].tuple_index(
                  b, {static_cast<int>(pi), xe})] = true;
          }
      }
      action[m][i] = po->index_of_relation(to, rr);
    }
  }
  po->psh = make_presheaf(cat, std::move(card), std::move(action));
  po->prod = make_product(cat, {po->psh, x});
  po->membership = empty_sub(po->prod.psh);
  for (int a = 0; a < c.num_objects(); ++a) {
    int id_pos = yoneda_index(c, a, c.identity[a]);
    for (std::size_t i = 0; i < po->relations[a].size(); ++i)
      for (int xe = 0; xe < x->card[a]; ++xe)
        if (po->relations[a][i].sel[a][po->yx[a].tuple_index(a, {id_pos, xe})])
          po->membership.sel[a][po->prod.tuple_index(
              a, {static_cast<int>(i), xe})] = true;
  }
  return po;
}

NatTrans classify(const Product& ax, const Subpresheaf& s,
                  const PowerObjectResult& po) {
  PshPtr a_psh = ax.factors[0];
  const FinCategory& c = *a_psh->cat;
  if (!(*ax.factors[1] == *po.base) || !(*s.parent == *ax.psh))
    throw InputError("classify: family is not a subobject of A×X");
  NatTrans chi;
  chi.src = a_psh;
  chi.dst = po.psh;
  chi.comp.resize(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    chi.comp[o].resize(a_psh->card[o]);
    for (int ae = 0; ae < a_psh->card[o]; ++ae) {
      Subpresheaf rel = empty_sub(po.yx[o].psh);
      for (int b = 0; b < c.num_objects(); ++b) {
        auto homs = c.hom(b, o);
        for (std::size_t pi = 0; pi < homs.size(); ++pi)
          for (int xe = 0; xe < po.base->card[b]; ++xe)
            if (s.sel[b][ax.tuple_index(
                    b, {a_psh->act(homs[pi], ae), xe})])
              rel.sel[b][po.yx[o].tuple_index(
                  b, {static_cast<int>(pi), xe})] = true;
      }
      chi.comp[o][ae] = po.index_of_relation(o, rel);
    }
  }
  return chi;
}

NatTrans power_direct_image(const PowerObjectResult& px,
                            const PowerObjectResult& py, const NatTrans& f) {
  const FinCategory& c = *f.src->cat;
  NatTrans t;
  t.src = px.psh;
  t.dst = py.psh;
  t.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    t.comp[a].resize(px.psh->card[a]);
    for (int i = 0; i < px.psh->card[a]; ++i) {
      const Subpresheaf& r = px.relations[a][i];
      Subpresheaf img = empty_sub(py.yx[a].psh);
      for (int b = 0; b < c.num_objects(); ++b)
        for (int e = 0; e < px.yx[a].psh->card[b]; ++e)
          if (r.sel[b][e]) {
            auto cs = px.yx[a].coords(b, e);
            img.sel[b][py.yx[a].tuple_index(b, {cs[0], f.at(b, cs[1])})] =
                true;
          }
      t.comp[a][i] = py.index_of_relation(a, img);
    }
  }
  return t;
}

NatTrans power_inverse_image(const PowerObjectResult& py,
                             const PowerObjectResult& px, const NatTrans& f) {
  const FinCategory& c = *f.src->cat;
  NatTrans t;
  t.src = py.psh;
  t.dst = px.psh;
  t.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    t.comp[a].resize(py.psh->card[a]);
    for (int i = 0; i < py.psh->card[a]; ++i) {
      const Subpresheaf& r = py.relations[a][i];
      Subpresheaf pre = empty_sub(px.yx[a].psh);
      for (int b = 0; b < c.num_objects(); ++b)
        for (int e = 0; e < px.yx[a].psh->card[b]; ++e) {
          auto cs = px.yx[a].coords(b, e);
          if (r.sel[b][py.yx[a].tuple_index(b, {cs[0], f.at(b, cs[1])})])
            pre.sel[b][e] = true;
        }
      t.comp[a][i] = px.index_of_relation(a, pre);
    }
  }
  return t;
}

PJPtr pj_object(const ClosureContext& ctx, PowerPtr po) {
  const FinCategory& c = *po->base->cat;
  auto pj = std::make_shared<PJObjectResult>();
  pj->base = po->base;
  pj->power = po;
  pj->closed.resize(c.num_objects());
  std::vector<std::vector<int>> to_pj(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    to_pj[a].assign(po->psh->card[a], -1);
    for (int i = 0; i < po->psh->card[a]; ++i)
      if (ctx.is_closed(po->relations[a][i])) {
        to_pj[a][i] = static_cast<int>(pj->closed[a].size());
        pj->closed[a].push_back(i);
      }
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(pj->closed[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      int img = po->psh->act(m, pj->closed[from][i]);
      // Restriction of a closed relation is closed (the closure operator
      // is natural), so the action descends to the carrier.
      if (to_pj[to][img] < 0)
        throw InputError("pj_object: restriction left the closed carrier");
      action[m][i] = to_pj[to][img];
    }
  }
  pj->psh = make_presheaf(po->base->cat, std::move(card), std::move(action));

  NatTrans q;
  q.src = po->psh;
  q.dst = pj->psh;
  q.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    q.comp[a].resize(po->psh->card[a]);
    for (int i = 0; i < po->psh->card[a]; ++i) {
      Subpresheaf cl = ctx.close(po->relations[a][i]);
      q.comp[a][i] = to_pj[a][po->index_of_relation(a, cl)];
    }
  }
  pj->quotient = std::move(q);

  pj->prod = make_product(po->base->cat, {pj->psh, po->base});
  pj->membership = empty_sub(pj->prod.psh);
  for (int a = 0; a < c.num_objects(); ++a) {
    int id_pos = yoneda_index(c, a, c.identity[a]);
    for (int j = 0; j < card[a]; ++j) {
      const Subpresheaf& rel = po->relations[a][pj->closed[a][j]];
      for (int xe = 0; xe < po->base->card[a]; ++xe)
        if (rel.sel[a][po->yx[a].tuple_index(a, {id_pos, xe})])
          pj->membership.sel[a][pj->prod.tuple_index(a, {j, xe})] = true;
    }
  }
  return pj;
}

NatTrans classify_closed(const ClosureContext& ctx, const Product& ax,
                         const Subpresheaf& s, const PJObjectResult& pj) {
  Subpresheaf cl = ctx.close(s);
  if (!(cl == s)) {
    for (std::size_t a = 0; a < s.sel.size(); ++a)
      for (std::size_t e = 0; e < s.sel[a].size(); ++e)
        if (cl.sel[a][e] != s.sel[a][e])
          throw InputError(
              "classify_closed: family is not closed; witness element " +
              std::to_string(e) + " at object " + std::to_string(a));
  }
  return compose(pj.quotient, classify(ax, s, *pj.power));
}

PowerPtr PowerContext::power(PshPtr x) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = power_.find(x.get());
  if (it != power_.end()) return it->second.second;
  PowerPtr po = power_object(x, cap_);
  power_.emplace(x.get(), std::make_pair(x, po));
  return po;
}

PJPtr PowerContext::pj(PshPtr x) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pj_.find(x.get());
    if (it != pj_.end()) return it->second.second;
  }
  PJPtr r = pj_object(ctx_, power(x));
  std::lock_guard<std::mutex> lock(mu_);
  pj_.emplace(x.get(), std::make_pair(x, r));
  return r;
}

bool is_locally_small(const PowerContext& pc, const NatTrans& f) {
  PowerPtr po = pc.power(f.src);
  Subpresheaf member = po->membership;
  Subpresheaf member_bar = pc.closure().close(member);
  FormulaPtr fx_eq_a = f_equals(app(f, var("x")), var("a"));
  FormulaPtr body =
      f_and(f_implies(f_member(var("x"), var("s"), member), fx_eq_a),
            f_implies(fx_eq_a, f_member(var("x"), var("s"), member_bar)));
  FormulaPtr phi = f_forall(
      "a", f.dst,
      f_exists("s", po->psh, f_forall("x", f.src, body)));
  return is_valid(f.src->cat, phi);
}

bool is_closed_small(const PowerContext& pc, const NatTrans& f) {
  PowerPtr po = pc.power(f.src);
  Subpresheaf member_bar = pc.closure().close(po->membership);
  FormulaPtr fx_eq_a = f_equals(app(f, var("x")), var("a"));
  FormulaPtr body =
      f_iff(fx_eq_a, f_member(var("x"), var("s"), member_bar));
  FormulaPtr phi = f_forall(
      "a", f.dst,
      f_exists("s", po->psh, f_forall("x", f.src, body)));
  return is_valid(f.src->cat, phi);
}

bool is_locally_small_diagrammatic(
    const PowerContext& pc, const NatTrans& f,
    const std::vector<PshPtr>& candidates,
    const std::function<bool(const NatTrans&)>& admit) {
  const ClosureContext& cl = pc.closure();
  for (PshPtr b : candidates) {
    for (const NatTrans& h : enumerate_nat_trans(b, f.dst)) {
      if (!is_epi(h)) continue;
      Product bx = make_product(b->cat, {b, f.src});
      // B×_A X inside B×X: pairs with h(b') = f(x).
      Subpresheaf fiber_prod = empty_sub(bx.psh);
      const FinCategory& c = *b->cat;
      for (int o = 0; o < c.num_objects(); ++o)
        for (int e = 0; e < bx.psh->card[o]; ++e) {
          auto cs = bx.coords(o, e);
          fiber_prod.sel[o][e] = h.at(o, cs[0]) == f.at(o, cs[1]);
        }
      // Search families T ⊆ B×_A X dense in B×_A X (as an object), with
      // the projection T → B admitted by the smallness predicate.
      ReifiedSub fp = sub_to_presheaf(fiber_prod);
      for (const Subpresheaf& t_in_fp : enumerate_subobjects(fp.psh)) {
        if (!cl.is_dense_mono(t_in_fp)) continue;
        if (admit) {
          ReifiedSub t = sub_to_presheaf(t_in_fp);
          NatTrans t_to_b =
              compose(bx.projection(0), compose(fp.incl, t.incl));
          if (!admit(t_to_b)) continue;
        }
        return true;
      }
    }
  }
  return false;
}

}  // namespace finsite
