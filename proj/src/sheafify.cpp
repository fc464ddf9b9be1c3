#include "finsite/sheafify.hpp"

#include <algorithm>
#include <map>

namespace finsite {

SieveShape reify_sieve(CatPtr cat, const Sieve& s) {
  const FinCategory& c = *cat;
  SieveShape shape;
  shape.sieve = s;
  shape.members.resize(c.num_objects());
  for (int m = 0; m < c.num_morphisms(); ++m)
    if (s.members[m]) shape.members[c.dom(m)].push_back(m);
  std::vector<int> card(c.num_objects());
  for (int b = 0; b < c.num_objects(); ++b)
    card[b] = static_cast<int>(shape.members[b].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int psi = 0; psi < c.num_morphisms(); ++psi) {
    int from = c.cod(psi), to = c.dom(psi);
    action[psi].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      int composite = c.compose(shape.members[from][i], psi);
      const auto& v = shape.members[to];
      action[psi][i] = static_cast<int>(
          std::find(v.begin(), v.end(), composite) - v.begin());
    }
  }
  shape.psh = make_presheaf(cat, std::move(card), std::move(action));
  return shape;
}

std::vector<NatTrans> matching_families(const SieveShape& shape, PshPtr x) {
  return enumerate_nat_trans(shape.psh, x);
}

std::vector<int> amalgamations(const SieveShape& shape, const NatTrans& fam,
                               PshPtr x) {
  const FinCategory& c = *x->cat;
  int a = shape.sieve.base;
  std::vector<int> out;
  for (int e = 0; e < x->card[a]; ++e) {
    bool ok = true;
    for (int b = 0; b < c.num_objects() && ok; ++b)
      for (std::size_t i = 0; i < shape.members[b].size() && ok; ++i)
        if (x->act(shape.members[b][i], e) !=
            fam.at(b, static_cast<int>(i)))
          ok = false;
    if (ok) out.push_back(e);
  }
  return out;
}

namespace {

enum class SheafGrade { NotSeparated, Separated, Sheaf };

SheafGrade grade(const ClosureContext& ctx, PshPtr x) {
  const FinCategory& c = *x->cat;
  SheafGrade g = SheafGrade::Sheaf;
  for (int a = 0; a < c.num_objects(); ++a)
    for (const Sieve& s : ctx.coverage().sieves_at(a)) {
      SieveShape shape = reify_sieve(x->cat, s);
      for (const NatTrans& fam : matching_families(shape, x)) {
        std::size_t n = amalgamations(shape, fam, x).size();
        if (n > 1) return SheafGrade::NotSeparated;
        if (n == 0) g = SheafGrade::Separated;
      }
    }
  return g;
}

}  // namespace

bool is_separated(const ClosureContext& ctx, PshPtr x) {
  return grade(ctx, x) != SheafGrade::NotSeparated;
}

bool is_sheaf(const ClosureContext& ctx, PshPtr x) {
  return grade(ctx, x) == SheafGrade::Sheaf;
}

SheafificationResult sheafify(const PowerContext& pc, PshPtr x) {
  const ClosureContext& ctx = pc.closure();
  SheafificationResult r;
  r.input = x;
  r.pj = pc.pj(x);
  // The singleton map classifies the diagonal family over X.
  Product xx = make_product(x->cat, {x, x});
  NatTrans singleton = classify(xx, diagonal(xx), *r.pj->power);
  r.sigma = compose(r.pj->quotient, singleton);
  r.image = image_factorization(r.sigma).image;
  r.closed_sub = ctx.close(r.image);
  ReifiedSub re = sub_to_presheaf(r.closed_sub);
  r.sheaf = re.psh;
  r.incl = re.incl;
  const FinCategory& c = *x->cat;
  std::vector<std::vector<int>> back(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    back[a].assign(r.pj->psh->card[a], -1);
    for (std::size_t i = 0; i < re.elems[a].size(); ++i)
      back[a][re.elems[a][i]] = static_cast<int>(i);
  }
  NatTrans unit;
  unit.src = x;
  unit.dst = r.sheaf;
  unit.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    unit.comp[a].resize(x->card[a]);
    for (int e = 0; e < x->card[a]; ++e)
      unit.comp[a][e] = back[a][r.sigma.at(a, e)];
  }
  r.unit = std::move(unit);
  return r;
}

NatTrans extend_along_dense(const ClosureContext& ctx, const Subpresheaf& m,
                            const NatTrans& v) {
  if (!ctx.is_dense_mono(m))
    throw InputError("extend_along_dense: mono is not dense");
  PshPtr x = v.dst;
  if (!is_sheaf(ctx, x))
    throw InputError("extend_along_dense: target is not a sheaf");
  ReifiedSub dom = sub_to_presheaf(m);
  if (!(*dom.psh == *v.src))
    throw InputError("extend_along_dense: map source is not the mono domain");
  const FinCategory& c = *x->cat;
  PshPtr a_psh = m.parent;
  std::vector<std::vector<int>> back(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    back[a].assign(a_psh->card[a], -1);
    for (std::size_t i = 0; i < dom.elems[a].size(); ++i)
      back[a][dom.elems[a][i]] = static_cast<int>(i);
  }
  NatTrans u;
  u.src = a_psh;
  u.dst = x;
  u.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    u.comp[a].resize(a_psh->card[a]);
    for (int z = 0; z < a_psh->card[a]; ++z) {
      Sieve s = ctx.membership_sieve(m, a, z);
      SieveShape shape = reify_sieve(a_psh->cat, s);
      NatTrans fam;
      fam.src = shape.psh;
      fam.dst = x;
      fam.comp.resize(c.num_objects());
      for (int b = 0; b < c.num_objects(); ++b) {
        fam.comp[b].resize(shape.members[b].size());
        for (std::size_t i = 0; i < shape.members[b].size(); ++i)
          fam.comp[b][i] =
              v.at(b, back[b][a_psh->act(shape.members[b][i], z)]);
      }
      auto am = amalgamations(shape, fam, x);
      if (am.size() != 1)
        throw InputError("extend_along_dense: amalgamation not unique");
      u.comp[a][z] = am.front();
    }
  }
  return u;
}

NatTrans sheafify_map(const PowerContext& pc, const SheafificationResult& sx,
                      const SheafificationResult& sy, const NatTrans& f) {
  const ClosureContext& ctx = pc.closure();
  NatTrans v = compose(sy.unit, f);   // X → a(Y)
  const FinCategory& c = *f.src->cat;
  // The image of η_X, viewed inside the reified a(X).
  Subpresheaf m = empty_sub(sx.sheaf);
  for (int a = 0; a < c.num_objects(); ++a)
    for (int e = 0; e < sx.input->card[a]; ++e)
      m.sel[a][sx.unit.at(a, e)] = true;
  ReifiedSub dom = sub_to_presheaf(m);
  // Descend v through the epi X ↠ Im(η): well-defined since Ker(η) ⊆ Ker(v).
  NatTrans v_desc;
  v_desc.src = dom.psh;
  v_desc.dst = sy.sheaf;
  v_desc.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    v_desc.comp[a].assign(dom.psh->card[a], -1);
    for (int e = 0; e < sx.input->card[a]; ++e) {
      int img = sx.unit.at(a, e);
      int pos = -1;
      for (std::size_t i = 0; i < dom.elems[a].size(); ++i)
        if (dom.elems[a][i] == img) pos = static_cast<int>(i);
      int val = v.at(a, e);
      if (v_desc.comp[a][pos] == -1) v_desc.comp[a][pos] = val;
      else if (v_desc.comp[a][pos] != val)
        throw InputError("sheafify_map: map does not respect Ker(η)");
    }
  }
  return extend_along_dense(ctx, m, v_desc);
}

namespace {

// One stage of the plus construction: pairs (covering sieve, matching
// family) modulo agreement on a common covering refinement.
struct PlusStage {
  std::vector<std::pair<int, NatTrans>> pairs;   // (index into J(a), family)
  std::vector<int> cls;                          // pair → class
  std::vector<int> reps;                         // class → pair
};

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int i) {
    while (up[i] != i) i = up[i] = up[up[i]];
    return i;
  }
  void unite(int i, int j) {
    i = find(i);
    j = find(j);
    if (i == j) return;
    if (i < j) std::swap(i, j);
    up[i] = j;
  }
};

}  // namespace

PlusResult plus_construction(const ClosureContext& ctx, PshPtr x) {
  const FinCategory& c = *x->cat;
  const Coverage& j = ctx.coverage();
  CatPtr cat = x->cat;

  std::vector<std::vector<Sieve>> covering(c.num_objects());
  std::vector<std::vector<SieveShape>> shapes(c.num_objects());
  std::vector<PlusStage> stage(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    covering[a] = j.sieves_at(a);
    for (const Sieve& s : covering[a]) shapes[a].push_back(reify_sieve(cat, s));
    for (std::size_t si = 0; si < covering[a].size(); ++si)
      for (const NatTrans& fam : matching_families(shapes[a][si], x))
        stage[a].pairs.emplace_back(static_cast<int>(si), fam);
  }

  // Families agree on a refinement iff they agree on some covering sieve
  // contained in the intersection of their domains.
  auto value_at = [&](int a, const std::pair<int, NatTrans>& p, int m) {
    const SieveShape& sh = shapes[a][p.first];
    int b = c.dom(m);
    const auto& v = sh.members[b];
    int pos = static_cast<int>(std::find(v.begin(), v.end(), m) - v.begin());
    return p.second.at(b, pos);
  };
  auto agree_on_refinement = [&](int a, const std::pair<int, NatTrans>& p,
                                 const std::pair<int, NatTrans>& q) {
    for (const Sieve& r : covering[a]) {
      bool inside = true;
      for (int m = 0; m < c.num_morphisms() && inside; ++m)
        if (r.members[m] && (!covering[a][p.first].members[m] ||
                             !covering[a][q.first].members[m]))
          inside = false;
      if (!inside) continue;
      bool same = true;
      for (int m = 0; m < c.num_morphisms() && same; ++m)
        if (r.members[m] && value_at(a, p, m) != value_at(a, q, m))
          same = false;
      if (same) return true;
    }
    return false;
  };

  for (int a = 0; a < c.num_objects(); ++a) {
    UnionFind uf(static_cast<int>(stage[a].pairs.size()));
    for (std::size_t i = 0; i < stage[a].pairs.size(); ++i)
      for (std::size_t k = i + 1; k < stage[a].pairs.size(); ++k)
        if (agree_on_refinement(a, stage[a].pairs[i], stage[a].pairs[k]))
          uf.unite(static_cast<int>(i), static_cast<int>(k));
    stage[a].cls.resize(stage[a].pairs.size());
    for (std::size_t i = 0; i < stage[a].pairs.size(); ++i) {
      int root = uf.find(static_cast<int>(i));
      if (root == static_cast<int>(i)) {
        stage[a].cls[i] = static_cast<int>(stage[a].reps.size());
        stage[a].reps.push_back(root);
      }
    }
    for (std::size_t i = 0; i < stage[a].pairs.size(); ++i)
      stage[a].cls[i] = stage[a].cls[uf.find(static_cast<int>(i))];
  }

  // Action: restrict the representative pair and find its class.
  auto restricted_class = [&](int a, int pair_idx, int m) {
    const auto& [si, fam] = stage[a].pairs[pair_idx];
    int b = c.dom(m);
    Sieve rs = restrict_sieve(c, covering[a][si], m);
    int rsi = -1;
    for (std::size_t i = 0; i < covering[b].size(); ++i)
      if (covering[b][i] == rs) rsi = static_cast<int>(i);
    if (rsi < 0)
      throw InputError("plus: restriction of a covering sieve not covering");
    const SieveShape& sh = shapes[b][rsi];
    NatTrans rfam;
    rfam.src = sh.psh;
    rfam.dst = x;
    rfam.comp.resize(c.num_objects());
    for (int d = 0; d < c.num_objects(); ++d) {
      rfam.comp[d].resize(sh.members[d].size());
      for (std::size_t i = 0; i < sh.members[d].size(); ++i)
        rfam.comp[d][i] =
            value_at(a, stage[a].pairs[pair_idx], c.compose(m, sh.members[d][i]));
    }
    for (std::size_t i = 0; i < stage[b].pairs.size(); ++i)
      if (stage[b].pairs[i].first == rsi &&
          stage[b].pairs[i].second.comp == rfam.comp)
        return stage[b].cls[i];
    throw InputError("plus: restricted family not found");
  };

  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(stage[a].reps.size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m);
    action[m].resize(card[from]);
    for (int k = 0; k < card[from]; ++k)
      action[m][k] = restricted_class(from, stage[from].reps[k], m);
  }
  PlusResult r;
  r.plus = make_presheaf(cat, std::move(card), std::move(action));

  // x ↦ class of the total family on the maximal sieve.
  NatTrans to_plus;
  to_plus.src = x;
  to_plus.dst = r.plus;
  to_plus.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    int max_si = -1;
    Sieve maxs = maximal_sieve(c, a);
    for (std::size_t i = 0; i < covering[a].size(); ++i)
      if (covering[a][i] == maxs) max_si = static_cast<int>(i);
    if (max_si < 0)
      throw InputError("plus: maximal sieve is not covering");
    const SieveShape& sh = shapes[a][max_si];
    to_plus.comp[a].resize(x->card[a]);
    for (int e = 0; e < x->card[a]; ++e) {
      NatTrans fam;
      fam.src = sh.psh;
      fam.dst = x;
      fam.comp.resize(c.num_objects());
      for (int d = 0; d < c.num_objects(); ++d) {
        fam.comp[d].resize(sh.members[d].size());
        for (std::size_t i = 0; i < sh.members[d].size(); ++i)
          fam.comp[d][i] = x->act(sh.members[d][i], e);
      }
      int cls = -1;
      for (std::size_t i = 0; i < stage[a].pairs.size(); ++i)
        if (stage[a].pairs[i].first == max_si &&
            stage[a].pairs[i].second.comp == fam.comp)
          cls = stage[a].cls[i];
      to_plus.comp[a][e] = cls;
    }
  }
  r.to_plus = std::move(to_plus);
  return r;
}

DoublePlusResult double_plus_oracle(const ClosureContext& ctx, PshPtr x) {
  PlusResult once = plus_construction(ctx, x);
  PlusResult twice = plus_construction(ctx, once.plus);
  DoublePlusResult r;
  r.sheaf = twice.plus;
  r.unit = compose(twice.to_plus, once.to_plus);
  return r;
}

std::vector<LeftExactnessInstance> check_left_exactness(
    const PowerContext& pc, const std::vector<PresheafDiagram>& diagrams) {
  std::vector<LeftExactnessInstance> out;
  for (std::size_t di = 0; di < diagrams.size(); ++di) {
    const PresheafDiagram& d = diagrams[di];
    LeftExactnessInstance inst;
    inst.label = "diagram " + std::to_string(di);
    LimitResult lim_e = limit(d);
    SheafificationResult s_apex = sheafify(pc, lim_e.apex);
    std::vector<SheafificationResult> s_nodes;
    for (PshPtr n : d.nodes) s_nodes.push_back(sheafify(pc, n));
    PresheafDiagram sd;
    for (const auto& s : s_nodes) sd.nodes.push_back(s.sheaf);
    for (const auto& ar : d.arrows)
      sd.arrows.push_back(
          {ar.src, ar.dst,
           sheafify_map(pc, s_nodes[ar.src], s_nodes[ar.dst], ar.t)});
    LimitResult lim_sh = limit(sd);
    // Comparison a(lim D) → lim a(D), located through its projections.
    std::vector<NatTrans> legs;
    for (std::size_t i = 0; i < d.nodes.size(); ++i)
      legs.push_back(
          sheafify_map(pc, s_apex, s_nodes[i], lim_e.projections[i]));
    const FinCategory& c = *lim_e.apex->cat;
    bool ok = true;
    NatTrans cmp;
    cmp.src = s_apex.sheaf;
    cmp.dst = lim_sh.apex;
    cmp.comp.resize(c.num_objects());
    for (int a = 0; a < c.num_objects() && ok; ++a) {
      cmp.comp[a].assign(s_apex.sheaf->card[a], -1);
      for (int e = 0; e < s_apex.sheaf->card[a] && ok; ++e) {
        int found = -1;
        for (int w = 0; w < lim_sh.apex->card[a]; ++w) {
          bool match = true;
          for (std::size_t i = 0; i < legs.size() && match; ++i)
            if (lim_sh.projections[i].at(a, w) != legs[i].at(a, e))
              match = false;
          if (match) {
            found = w;
            break;
          }
        }
        if (found < 0) ok = false;
        cmp.comp[a][e] = found;
      }
    }
    inst.comparison_iso = ok && is_iso(cmp);
    out.push_back(std::move(inst));
  }
  return out;
}

namespace {

// The fiber S_b ⊆ 𝐲(a)×X of the witness family at b ∈ B(a).
Subpresheaf witness_fiber(const ExponentialWitness& w, const Product& yx,
                          int a, int b_elem) {
  const FinCategory& c = *w.b->cat;
  Subpresheaf fib = empty_sub(yx.psh);
  for (int cc = 0; cc < c.num_objects(); ++cc) {
    auto homs = c.hom(cc, a);
    for (std::size_t pi = 0; pi < homs.size(); ++pi)
      for (int xe = 0; xe < w.bx.factors[1]->card[cc]; ++xe)
        if (w.family.sel[cc][w.bx.tuple_index(
                cc, {w.b->act(homs[pi], b_elem), xe})])
          fib.sel[cc][yx.tuple_index(cc, {static_cast<int>(pi), xe})] = true;
  }
  return fib;
}

}  // namespace

PshPtr sheaf_exponential(const PowerContext& pc, PshPtr x,
                         const ExponentialWitness& w, PshPtr y) {
  const ClosureContext& ctx = pc.closure();
  const FinCategory& c = *x->cat;
  CatPtr cat = x->cat;
  for (int a = 0; a < c.num_objects(); ++a)
    if (w.b->card[a] == 0)
      throw InputError("sheaf_exponential: witness base is not epi onto 1");
  if (!(*w.bx.factors[0] == *w.b) || !(*w.bx.factors[1] == *x) ||
      !(*w.family.parent == *w.bx.psh))
    throw InputError("sheaf_exponential: witness family is not on B×X");
  if (!ctx.is_dense_mono(w.family))
    throw InputError("sheaf_exponential: witness family is not dense in B×X");
  if (!is_sheaf(ctx, x) || !is_sheaf(ctx, y))
    throw InputError("sheaf_exponential: both objects must be sheaves");

  // Stage a: pairs (b, f: S_b → Y). Reified fibers keep index maps around.
  struct Element {
    int b_elem;
    NatTrans f;                    // on the reified fiber
    std::vector<std::vector<int>> fiber_index;   // yx element → reified idx
  };
  std::vector<Product> yx;
  std::vector<std::vector<Element>> elems(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    yx.push_back(make_product(cat, {yoneda(cat, a), x}));
    for (int be = 0; be < w.b->card[a]; ++be) {
      Subpresheaf fib = witness_fiber(w, yx[a], a, be);
      ReifiedSub re = sub_to_presheaf(fib);
      std::vector<std::vector<int>> back(c.num_objects());
      for (int cc = 0; cc < c.num_objects(); ++cc) {
        back[cc].assign(yx[a].psh->card[cc], -1);
        for (std::size_t i = 0; i < re.elems[cc].size(); ++i)
          back[cc][re.elems[cc][i]] = static_cast<int>(i);
      }
      for (const NatTrans& f : enumerate_nat_trans(re.psh, y))
        elems[a].push_back({be, f, back});
    }
  }

  // Agreement on the overlap of fibers.
  auto related = [&](int a, const Element& p, const Element& q) {
    for (int cc = 0; cc < c.num_objects(); ++cc)
      for (int e = 0; e < yx[a].psh->card[cc]; ++e) {
        int pi = p.fiber_index[cc][e], qi = q.fiber_index[cc][e];
        if (pi >= 0 && qi >= 0 && p.f.at(cc, pi) != q.f.at(cc, qi))
          return false;
      }
    return true;
  };

  std::vector<UnionFind> uf;
  for (int a = 0; a < c.num_objects(); ++a) {
    uf.emplace_back(static_cast<int>(elems[a].size()));
    for (std::size_t i = 0; i < elems[a].size(); ++i)
      for (std::size_t k = i + 1; k < elems[a].size(); ++k)
        if (related(static_cast<int>(a), elems[a][i], elems[a][k]))
          uf[a].unite(static_cast<int>(i), static_cast<int>(k));
    // The relation must already be transitive; union-find classes must
    // stay pairwise related, else the witness was invalid.
    for (std::size_t i = 0; i < elems[a].size(); ++i)
      for (std::size_t k = 0; k < elems[a].size(); ++k)
        if (uf[a].find(static_cast<int>(i)) ==
                uf[a].find(static_cast<int>(k)) &&
            !related(static_cast<int>(a), elems[a][i], elems[a][k]))
          throw InputError(
              "sheaf_exponential: overlap agreement is not transitive");
  }

  std::vector<std::vector<int>> reps(c.num_objects());
  std::vector<std::vector<int>> cls(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    cls[a].resize(elems[a].size());
    for (std::size_t i = 0; i < elems[a].size(); ++i)
      if (uf[a].find(static_cast<int>(i)) == static_cast<int>(i)) {
        cls[a][i] = static_cast<int>(reps[a].size());
        reps[a].push_back(static_cast<int>(i));
      }
    for (std::size_t i = 0; i < elems[a].size(); ++i)
      cls[a][i] = cls[a][uf[a].find(static_cast<int>(i))];
  }

  // Action: (b, f)·φ = (B(φ)b, f·φ) with (f·φ)(ψ, x) = f(φψ, x).
  auto restrict_element = [&](int a, const Element& el, int m) {
    int to = c.dom(m);
    int rb = w.b->act(m, el.b_elem);
    Subpresheaf fib = witness_fiber(w, yx[to], to, rb);
    ReifiedSub re = sub_to_presheaf(fib);
    NatTrans rf;
    rf.src = re.psh;
    rf.dst = y;
    rf.comp.resize(c.num_objects());
    for (int cc = 0; cc < c.num_objects(); ++cc) {
      rf.comp[cc].resize(re.elems[cc].size());
      for (std::size_t i = 0; i < re.elems[cc].size(); ++i) {
        auto cs = yx[to].coords(cc, re.elems[cc][i]);
        int psi = c.hom(cc, to)[cs[0]];
        int comp_idx = yx[a].tuple_index(
            cc, {yoneda_index(c, a, c.compose(m, psi)), cs[1]});
        rf.comp[cc][i] = el.f.at(cc, el.fiber_index[cc][comp_idx]);
      }
    }
    for (std::size_t i = 0; i < elems[to].size(); ++i)
      if (elems[to][i].b_elem == rb && elems[to][i].f.comp == rf.comp)
        return cls[to][i];
    throw InputError("sheaf_exponential: restricted element not found");
  };

  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(reps[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m);
    action[m].resize(card[from]);
    for (int k = 0; k < card[from]; ++k)
      action[m][k] = restrict_element(from, elems[from][reps[from][k]], m);
  }
  return make_presheaf(cat, std::move(card), std::move(action));
}

const SheafificationResult& SheafifyCache::get(PshPtr x) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(x.get());
    if (it != cache_.end()) return it->second.second;
  }
  SheafificationResult r = sheafify(pc_, x);
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, _] = cache_.emplace(x.get(), std::make_pair(x, std::move(r)));
  return it->second.second;
}

NatTrans SheafifyCache::map(const NatTrans& f) const {
  return sheafify_map(pc_, get(f.src), get(f.dst), f);
}

PshPtr presheaf_exponential(PshPtr x, PshPtr y) {
  CatPtr cat = x->cat;
  const FinCategory& c = *cat;
  std::vector<Product> yx;
  std::vector<std::vector<NatTrans>> maps(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    yx.push_back(make_product(cat, {yoneda(cat, a), x}));
    maps[a] = enumerate_nat_trans(yx[a].psh, y);
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(maps[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      // Precompose with 𝐲(b)×X → 𝐲(a)×X, (ψ, x) ↦ (φ∘ψ, x).
      NatTrans g;
      g.src = yx[to].psh;
      g.dst = y;
      g.comp.resize(c.num_objects());
      for (int cc = 0; cc < c.num_objects(); ++cc) {
        g.comp[cc].resize(yx[to].psh->card[cc]);
        for (int e = 0; e < yx[to].psh->card[cc]; ++e) {
          auto cs = yx[to].coords(cc, e);
          int psi = c.hom(cc, to)[cs[0]];
          g.comp[cc][e] = maps[from][i].at(
              cc, yx[from].tuple_index(
                      cc, {yoneda_index(c, from, c.compose(m, psi)), cs[1]}));
        }
      }
      int found = -1;
      for (std::size_t k = 0; k < maps[to].size(); ++k)
        if (maps[to][k].comp == g.comp) found = static_cast<int>(k);
      if (found < 0)
        throw InputError("presheaf_exponential: restriction not found");
      action[m][i] = found;
    }
  }
  return make_presheaf(cat, std::move(card), std::move(action));
}

}  // namespace finsite
