#include "finsite/smallmaps.hpp"

#include <algorithm>
#include <map>

namespace finsite {

std::string status_name(Status s) {
  switch (s) {
    case Status::Verified: return "verified";
    case Status::Counterexample: return "counterexample";
    case Status::UnknownWithinBounds: return "unknown-within-bounds";
    case Status::WitnessFound: return "witness-found";
    case Status::NoneInUniverse: return "none-in-universe";
    case Status::Skipped: return "skipped";
  }
  return "unknown";
}

Universe universe_from_objects(CatPtr cat, std::vector<PshPtr> objects) {
  Universe u;
  u.cat = std::move(cat);
  u.objects = std::move(objects);
  for (std::size_t i = 0; i < u.objects.size(); ++i)
    for (std::size_t j = 0; j < u.objects.size(); ++j)
      for (NatTrans& t : enumerate_nat_trans(u.objects[i], u.objects[j])) {
        u.maps.push_back(std::move(t));
        u.endpoints.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
  return u;
}

Universe auto_universe(CatPtr cat, int max_card) {
  return universe_from_objects(cat, enumerate_presheaves(cat, max_card));
}

Universe sheaf_universe(const ClosureContext& ctx, int max_card) {
  std::vector<PshPtr> sheaves;
  for (PshPtr x : enumerate_presheaves(ctx.cat(), max_card))
    if (is_sheaf(ctx, x)) sheaves.push_back(x);
  return universe_from_objects(ctx.cat(), std::move(sheaves));
}

namespace {

std::vector<NatTrans> all_isos(PshPtr x, PshPtr y) {
  std::vector<NatTrans> out;
  for (NatTrans& t : enumerate_nat_trans(x, y))
    if (is_iso(t)) out.push_back(std::move(t));
  return out;
}

}  // namespace

bool MapFamily::contains(const NatTrans& f) const {
  if (all) return true;
  for (const NatTrans& g : listed) {
    if (*g.src == *f.src && *g.dst == *f.dst && g.comp == f.comp) return true;
    // Match up to isomorphism of arrows: j∘f = g∘i.
    if (g.src->card != f.src->card || g.dst->card != f.dst->card) continue;
    for (const NatTrans& i : all_isos(f.src, g.src))
      for (const NatTrans& j : all_isos(f.dst, g.dst))
        if (compose(j, f).comp == compose(g, i).comp) return true;
  }
  return false;
}

Notions ambient_notions(const MapFamily& fam) {
  Notions n;
  n.label = "ambient/" + fam.name;
  n.family = [fam](const NatTrans& f) { return fam.contains(f); };
  n.epi = [](const NatTrans& f) { return is_epi(f); };
  n.quasi_pullback = [](const Square& sq) { return is_quasi_pullback(sq); };
  n.reflect_arrow = [](const NatTrans& f) { return f; };
  n.pointwise_comparison = true;
  return n;
}

Notions sheaf_notions(const PowerContext& pc, const SheafifyCache& sh) {
  Notions n;
  n.label = "sheaf/locally-small";
  auto memo = std::make_shared<
      std::map<std::pair<std::pair<const Presheaf*, const Presheaf*>,
                         std::vector<std::vector<int>>>,
               bool>>();
  n.family = [&pc, memo](const NatTrans& f) {
    auto key = std::make_pair(std::make_pair(f.src.get(), f.dst.get()), f.comp);
    auto it = memo->find(key);
    if (it != memo->end()) return it->second;
    bool v = is_locally_small(pc, f);
    memo->emplace(std::move(key), v);
    return v;
  };
  n.epi = [&pc](const NatTrans& f) { return pc.closure().is_dense_map(f); };
  n.quasi_pullback = [&pc](const Square& sq) {
    return is_local_quasi_pullback(pc.closure(), sq);
  };
  n.reflect_arrow = [&sh](const NatTrans& f) { return sh.map(f); };
  n.pointwise_comparison = false;
  return n;
}

namespace {

struct MapIndex {
  // Per (src, dst) object pair, the universe maps between them.
  std::map<std::pair<int, int>, std::vector<int>> by_endpoints;

  explicit MapIndex(const Universe& u) {
    for (std::size_t i = 0; i < u.maps.size(); ++i)
      by_endpoints[u.endpoints[i]].push_back(static_cast<int>(i));
  }
  const std::vector<int>& between(int s, int d) const {
    static const std::vector<int> none;
    auto it = by_endpoints.find({s, d});
    return it == by_endpoints.end() ? none : it->second;
  }
};

std::string map_label(const Universe& u, int i) {
  return "map#" + std::to_string(i) + " (obj" +
         std::to_string(u.endpoints[i].first) + " -> obj" +
         std::to_string(u.endpoints[i].second) + ")";
}

NatTrans coproduct_of_maps(const NatTrans& f, const NatTrans& g) {
  ColimitResult src = binary_coproduct(f.src, g.src);
  ColimitResult dst = binary_coproduct(f.dst, g.dst);
  const FinCategory& c = *f.src->cat;
  NatTrans t;
  t.src = src.apex;
  t.dst = dst.apex;
  t.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    t.comp[a].assign(src.apex->card[a], -1);
    for (int e = 0; e < f.src->card[a]; ++e)
      t.comp[a][src.injections[0].at(a, e)] =
          dst.injections[0].at(a, f.at(a, e));
    for (int e = 0; e < g.src->card[a]; ++e)
      t.comp[a][src.injections[1].at(a, e)] =
          dst.injections[1].at(a, g.at(a, e));
  }
  return t;
}

}  // namespace

std::vector<AxiomResult> check_axioms(const Universe& u, const Notions& n,
                                      const HarnessOptions& opt) {
  std::vector<AxiomResult> out;
  MapIndex idx(u);
  const int nmaps = static_cast<int>(u.maps.size());
  std::vector<char> in_family(nmaps);
  for (int i = 0; i < nmaps; ++i) in_family[i] = n.family(u.maps[i]);

  {  // (A1) isomorphisms and composition
    AxiomResult r{"A1", Status::Verified, "", 0, 0};
    for (int i = 0; i < nmaps && r.status == Status::Verified; ++i) {
      if (!is_iso(u.maps[i])) continue;
      ++r.checked;
      if (!in_family[i]) {
        r.status = Status::Counterexample;
        r.detail = "iso not in family: " + map_label(u, i);
      }
    }
    for (int i = 0; i < nmaps && r.status == Status::Verified; ++i) {
      if (!in_family[i]) continue;
      for (int j = 0; j < nmaps && r.status == Status::Verified; ++j) {
        if (!in_family[j]) continue;
        if (u.endpoints[i].second != u.endpoints[j].first) continue;
        ++r.checked;
        if (r.checked > opt.pair_cap) {
          ++r.skipped;
          continue;
        }
        if (!n.family(compose(u.maps[j], u.maps[i]))) {
          r.status = Status::Counterexample;
          r.detail = "composite of " + map_label(u, i) + " and " +
                     map_label(u, j) + " not in family";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // (A2) pullback stability
    AxiomResult r{"A2", Status::Verified, "", 0, 0};
    for (int fi = 0; fi < nmaps && r.status == Status::Verified; ++fi) {
      if (!in_family[fi]) continue;
      for (int hi = 0; hi < nmaps && r.status == Status::Verified; ++hi) {
        if (u.endpoints[hi].second != u.endpoints[fi].second) continue;
        ++r.checked;
        LimitResult pb = pullback(u.maps[hi], u.maps[fi]);
        if (!n.family(pb.projections[0])) {
          r.status = Status::Counterexample;
          r.detail = "pullback of " + map_label(u, fi) + " along " +
                     map_label(u, hi) + " leaves the family";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // (A3) descent along epis
    AxiomResult r{"A3", Status::Verified, "", 0, 0};
    for (int fi = 0; fi < nmaps && r.status == Status::Verified; ++fi) {
      if (in_family[fi]) continue;   // only non-members can refute descent
      for (int hi = 0; hi < nmaps && r.status == Status::Verified; ++hi) {
        if (u.endpoints[hi].second != u.endpoints[fi].second) continue;
        if (!n.epi(u.maps[hi])) continue;
        ++r.checked;
        LimitResult pb = pullback(u.maps[hi], u.maps[fi]);
        if (n.family(pb.projections[0])) {
          r.status = Status::Counterexample;
          r.detail = "descent fails: pullback of " + map_label(u, fi) +
                     " along epi " + map_label(u, hi) + " is in the family";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // (A4) 0 → 1 and 1+1 → 1
    AxiomResult r{"A4", Status::Verified, "", 2, 0};
    PshPtr zero = initial_presheaf(u.cat);
    PshPtr one = terminal_presheaf(u.cat);
    NatTrans zero_to_one;
    zero_to_one.src = zero;
    zero_to_one.dst = one;
    zero_to_one.comp.assign(u.cat->num_objects(), {});
    ColimitResult two = binary_coproduct(one, one);
    NatTrans codiag;
    codiag.src = two.apex;
    codiag.dst = one;
    codiag.comp.resize(u.cat->num_objects());
    for (int a = 0; a < u.cat->num_objects(); ++a)
      codiag.comp[a].assign(two.apex->card[a], 0);
    if (!n.family(n.reflect_arrow(zero_to_one))) {
      r.status = Status::Counterexample;
      r.detail = "0 -> 1 not in family";
    } else if (!n.family(n.reflect_arrow(codiag))) {
      r.status = Status::Counterexample;
      r.detail = "1+1 -> 1 not in family";
    }
    out.push_back(std::move(r));
  }

  {  // (A5) closure under +
    AxiomResult r{"A5", Status::Verified, "", 0, 0};
    long long budget = opt.pair_cap;
    for (int i = 0; i < nmaps && r.status == Status::Verified; ++i) {
      if (!in_family[i]) continue;
      for (int j = 0; j < nmaps && r.status == Status::Verified; ++j) {
        if (!in_family[j]) continue;
        if (--budget < 0) {
          ++r.skipped;
          continue;
        }
        ++r.checked;
        NatTrans sum = coproduct_of_maps(u.maps[i], u.maps[j]);
        if (!n.family(n.reflect_arrow(sum))) {
          r.status = Status::Counterexample;
          r.detail = "sum of " + map_label(u, i) + " and " + map_label(u, j) +
                     " not in family";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // (A6) quotients
    AxiomResult r{"A6", Status::Verified, "", 0, 0};
    for (int hi = 0; hi < nmaps && r.status == Status::Verified; ++hi) {
      if (!n.epi(u.maps[hi])) continue;
      for (int gi = 0; gi < nmaps && r.status == Status::Verified; ++gi) {
        if (u.endpoints[gi].first != u.endpoints[hi].second) continue;
        NatTrans f = compose(u.maps[gi], u.maps[hi]);
        if (!n.family(f)) continue;
        ++r.checked;
        if (!in_family[gi]) {
          r.status = Status::Counterexample;
          r.detail = "quotient fails: " + map_label(u, gi) +
                     " not in family though its composite with epi " +
                     map_label(u, hi) + " is";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // (A7) collection
    AxiomResult r{"A7", Status::Verified, "", 0, 0};
    int unwitnessed = 0;
    for (int fi = 0; fi < nmaps; ++fi) {
      if (!in_family[fi]) continue;
      int xobj = u.endpoints[fi].first, aobj = u.endpoints[fi].second;
      for (int pi = 0; pi < nmaps; ++pi) {
        if (u.endpoints[pi].second != xobj) continue;
        if (!n.epi(u.maps[pi])) continue;
        ++r.checked;
        int pobj = u.endpoints[pi].first;
        bool found = false;
        for (int bobj = 0;
             bobj < static_cast<int>(u.objects.size()) && !found; ++bobj)
          for (int hi : idx.between(bobj, aobj)) {
            if (found) break;
            if (!n.epi(u.maps[hi])) continue;
            for (int yobj = 0;
                 yobj < static_cast<int>(u.objects.size()) && !found; ++yobj)
              for (int gi : idx.between(yobj, bobj)) {
                if (found) break;
                if (!in_family[gi]) continue;
                for (int ki : idx.between(yobj, pobj)) {
                  NatTrans top = compose(u.maps[pi], u.maps[ki]);
                  Square sq{top, u.maps[gi], u.maps[hi], u.maps[fi]};
                  if (!square_commutes(sq)) continue;
                  if (n.quasi_pullback(sq)) {
                    found = true;
                    break;
                  }
                }
              }
          }
        if (!found) ++unwitnessed;
      }
    }
    if (unwitnessed > 0) {
      r.status = Status::UnknownWithinBounds;
      r.detail = std::to_string(unwitnessed) +
                 " instances without a witness in the universe";
    }
    out.push_back(std::move(r));
  }

  return out;
}

AxiomResult check_p1(const Universe& u, const MapFamily& fam,
                     const HarnessOptions& opt) {
  AxiomResult r{"P1", Status::Verified, "", 0, 0};
  for (std::size_t xi = 0; xi < u.objects.size(); ++xi) {
    PshPtr x = u.objects[xi];
    PowerPtr po;
    try {
      po = power_object(x, opt.power_stage_cap);
    } catch (const ResourceError&) {
      ++r.skipped;
      continue;
    }
    for (std::size_t ai = 0; ai < u.objects.size(); ++ai) {
      PshPtr a = u.objects[ai];
      if (r.status != Status::Verified) break;
      ++r.checked;
      Product ax = make_product(u.cat, {a, x});
      // Admitted indexed families over A.
      std::vector<std::vector<std::vector<bool>>> families;
      for (const Subpresheaf& s : enumerate_subobjects(ax.psh)) {
        if (!fam.all) {
          ReifiedSub re = sub_to_presheaf(s);
          NatTrans to_a = compose(ax.projection(0), re.incl);
          if (!fam.contains(to_a)) continue;
        }
        families.push_back(s.sel);
      }
      std::sort(families.begin(), families.end());
      // Families hit by maps A → P(X).
      std::vector<std::vector<std::vector<bool>>> hit;
      for (const NatTrans& chi : enumerate_nat_trans(a, po->psh)) {
        Subpresheaf t = empty_sub(ax.psh);
        for (int o = 0; o < u.cat->num_objects(); ++o)
          for (int e = 0; e < ax.psh->card[o]; ++e) {
            auto cs = ax.coords(o, e);
            t.sel[o][e] = po->membership.sel[o][po->prod.tuple_index(
                o, {chi.at(o, cs[0]), cs[1]})];
          }
        hit.push_back(t.sel);
      }
      std::sort(hit.begin(), hit.end());
      for (std::size_t k = 0; k + 1 < hit.size(); ++k)
        if (hit[k] == hit[k + 1]) {
          r.status = Status::Counterexample;
          r.detail = "two classifying maps induce the same family (X=obj" +
                     std::to_string(xi) + ", A=obj" + std::to_string(ai) + ")";
        }
      if (r.status == Status::Verified && hit != families) {
        r.status = Status::Counterexample;
        r.detail = "classified families differ from admitted families (X=obj" +
                   std::to_string(xi) + ", A=obj" + std::to_string(ai) + ")";
      }
    }
  }
  if (r.status == Status::Verified && r.checked == 0 && r.skipped > 0) {
    r.status = Status::Skipped;
    r.detail = "all instances over the power-object cap";
  }
  return r;
}

AxiomResult check_s2_bounded(const Universe& u, const Notions& n,
                             const HarnessOptions& opt) {
  AxiomResult r{"S2", Status::NoneInUniverse, "", 0, 0};
  MapIndex idx(u);
  const int nmaps = static_cast<int>(u.maps.size());
  std::vector<char> in_family(nmaps);
  for (int i = 0; i < nmaps; ++i) in_family[i] = n.family(u.maps[i]);

  // Candidate targets first refuted by maps with an empty stage, then by
  // large sources; this finds refuting f's early.
  std::vector<int> f_order;
  for (int i = 0; i < nmaps; ++i)
    if (in_family[i]) f_order.push_back(i);
  auto hardness = [&](int i) {
    const auto& card = u.maps[i].src->card;
    bool has_empty = std::any_of(card.begin(), card.end(),
                                 [](int c) { return c == 0; });
    int total = u.maps[i].src->total_elements();
    return std::make_tuple(has_empty ? 0 : 1, -total, i);
  };
  std::sort(f_order.begin(), f_order.end(),
            [&](int i, int j) { return hardness(i) < hardness(j); });

  long long budget = opt.s2_budget;
  for (int ui = 0; ui < nmaps; ++ui) {
    if (!in_family[ui]) continue;
    int uobj = u.endpoints[ui].second;
    bool represents_all = true;
    for (int fi : f_order) {
      int xobj = u.endpoints[fi].first, aobj = u.endpoints[fi].second;
      const NatTrans& f = u.maps[fi];
      bool found = false;
      for (int bobj = 0; bobj < static_cast<int>(u.objects.size()) && !found;
           ++bobj) {
        for (int hi : idx.between(bobj, aobj)) {
          if (found) break;
          if (!n.epi(u.maps[hi])) continue;
          for (int ci : idx.between(bobj, uobj)) {
            if (found) break;
            if (--budget < 0) {
              r.status = Status::UnknownWithinBounds;
              r.detail = "search budget exhausted";
              return r;
            }
            LimitResult pb = pullback(u.maps[ci], u.maps[ui]);
            PshPtr y = pb.apex;
            const NatTrans& to_b = pb.projections[0];
            // Necessary conditions before enumerating maps Y → X.
            bool feasible = true;
            const FinCategory& c = *u.cat;
            for (int o = 0; o < c.num_objects() && feasible; ++o)
              for (int be = 0; be < u.objects[bobj]->card[o] && feasible;
                   ++be) {
                int yfiber = 0;
                for (int e = 0; e < y->card[o]; ++e)
                  if (to_b.at(o, e) == be) ++yfiber;
                int ffiber = 0;
                int target = u.maps[hi].at(o, be);
                for (int e = 0; e < u.objects[xobj]->card[o]; ++e)
                  if (f.at(o, e) == target) ++ffiber;
                if (ffiber == 0 && yfiber > 0) feasible = false;
                if (n.pointwise_comparison && yfiber < ffiber)
                  feasible = false;
              }
            if (!feasible) continue;
            NatTrans hb = compose(u.maps[hi], to_b);
            for (const NatTrans& m :
                 enumerate_nat_trans(y, u.objects[xobj])) {
              if (--budget < 0) {
                r.status = Status::UnknownWithinBounds;
                r.detail = "search budget exhausted";
                return r;
              }
              if (!(compose(f, m).comp == hb.comp)) continue;
              Square sq{m, to_b, u.maps[hi], f};
              if (n.quasi_pullback(sq)) {
                found = true;
                break;
              }
            }
          }
        }
      }
      if (!found) {
        represents_all = false;
        break;
      }
    }
    ++r.checked;
    if (represents_all) {
      r.status = Status::WitnessFound;
      r.detail = "weakly representing map: " + map_label(u, ui);
      return r;
    }
  }
  if (r.status == Status::NoneInUniverse)
    r.detail = "no universe map weakly represents the family";
  return r;
}

namespace {

// Sheaf-level (P1): hom(A, P_J(X)) must classify exactly the closed
// families over A (with the all-maps ambient family every closed family
// is locally small).
AxiomResult check_pj_classification(const PowerContext& pc, const Universe& u,
                                    const HarnessOptions& opt) {
  AxiomResult r{"P1", Status::Verified, "", 0, 0};
  const ClosureContext& cl = pc.closure();
  for (std::size_t xi = 0; xi < u.objects.size(); ++xi) {
    PshPtr x = u.objects[xi];
    PJPtr pj;
    try {
      pj = pc.pj(x);
    } catch (const ResourceError&) {
      ++r.skipped;
      continue;
    }
    for (std::size_t ai = 0; ai < u.objects.size(); ++ai) {
      PshPtr a = u.objects[ai];
      if (r.status != Status::Verified) break;
      ++r.checked;
      Product ax = make_product(u.cat, {a, x});
      std::vector<std::vector<std::vector<bool>>> closed_families;
      for (const Subpresheaf& s : enumerate_subobjects(ax.psh))
        if (cl.is_closed(s)) closed_families.push_back(s.sel);
      std::sort(closed_families.begin(), closed_families.end());
      std::vector<std::vector<std::vector<bool>>> hit;
      for (const NatTrans& chi : enumerate_nat_trans(a, pj->psh)) {
        Subpresheaf t = empty_sub(ax.psh);
        for (int o = 0; o < u.cat->num_objects(); ++o)
          for (int e = 0; e < ax.psh->card[o]; ++e) {
            auto cs = ax.coords(o, e);
            t.sel[o][e] = pj->membership.sel[o][pj->prod.tuple_index(
                o, {chi.at(o, cs[0]), cs[1]})];
          }
        hit.push_back(t.sel);
      }
      std::sort(hit.begin(), hit.end());
      for (std::size_t k = 0; k + 1 < hit.size(); ++k)
        if (hit[k] == hit[k + 1]) {
          r.status = Status::Counterexample;
          r.detail = "two maps into P_J classify the same closed family";
        }
      if (r.status == Status::Verified && hit != closed_families) {
        r.status = Status::Counterexample;
        r.detail =
            "maps into P_J do not classify exactly the closed families "
            "(X=obj" +
            std::to_string(xi) + ", A=obj" + std::to_string(ai) + ")";
      }
    }
  }
  (void)opt;
  return r;
}

}  // namespace

std::vector<AxiomResult> check_sheaf_small_maps(const PowerContext& pc,
                                                const Universe& sheaf_u,
                                                const Universe& ambient_u,
                                                const HarnessOptions& opt) {
  const ClosureContext& cl = pc.closure();
  for (PshPtr x : sheaf_u.objects)
    if (!is_sheaf(cl, x))
      throw InputError("check_sheaf_small_maps: universe object is not a sheaf");

  SheafifyCache cache(pc);
  Notions n = sheaf_notions(pc, cache);
  std::vector<AxiomResult> out = check_axioms(sheaf_u, n, opt);
  out.push_back(check_pj_classification(pc, sheaf_u, opt));

  const int nmaps = static_cast<int>(sheaf_u.maps.size());
  std::vector<char> ls(nmaps);
  for (int i = 0; i < nmaps; ++i) ls[i] = n.family(sheaf_u.maps[i]);
  std::vector<char> dense(nmaps);
  for (int i = 0; i < nmaps; ++i) dense[i] = cl.is_dense_map(sheaf_u.maps[i]);
  MapIndex idx(sheaf_u);

  {  // units of the adjunction sit in local quasi-pullback squares
    AxiomResult r{"lemma:unit-squares-local-quasi-pullbacks",
                  Status::Verified, "", 0, 0};
    for (std::size_t i = 0; i < ambient_u.maps.size(); ++i) {
      const NatTrans& f = ambient_u.maps[i];
      const SheafificationResult& sx = cache.get(f.src);
      const SheafificationResult& sy = cache.get(f.dst);
      NatTrans af = cache.map(f);
      Square sq{sx.unit, f, sy.unit, af};
      ++r.checked;
      if (!is_local_quasi_pullback(cl, sq)) {
        r.status = Status::Counterexample;
        r.detail = "unit square of ambient map#" + std::to_string(i) +
                   " is not a local quasi-pullback";
        break;
      }
    }
    out.push_back(std::move(r));
  }

  {  // composites of locally small maps are locally small
    AxiomResult r{"lemma:composites-locally-small", Status::Verified, "", 0, 0};
    for (int i = 0; i < nmaps && r.status == Status::Verified; ++i) {
      if (!ls[i]) continue;
      for (int j = 0; j < nmaps && r.status == Status::Verified; ++j) {
        if (!ls[j]) continue;
        if (sheaf_u.endpoints[i].second != sheaf_u.endpoints[j].first)
          continue;
        ++r.checked;
        if (!n.family(compose(sheaf_u.maps[j], sheaf_u.maps[i]))) {
          r.status = Status::Counterexample;
          r.detail = "composite of " + map_label(sheaf_u, i) + " and " +
                     map_label(sheaf_u, j) + " is not locally small";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // quotients along dense maps preserve local smallness
    AxiomResult r{"lemma:quotients-locally-small", Status::Verified, "", 0, 0};
    for (int di = 0; di < nmaps && r.status == Status::Verified; ++di) {
      if (!dense[di]) continue;
      for (int fi = 0; fi < nmaps && r.status == Status::Verified; ++fi) {
        if (sheaf_u.endpoints[fi].first != sheaf_u.endpoints[di].second)
          continue;
        NatTrans f = compose(sheaf_u.maps[fi], sheaf_u.maps[di]);
        if (!n.family(f)) continue;
        ++r.checked;
        if (!ls[fi]) {
          r.status = Status::Counterexample;
          r.detail = "dense quotient " + map_label(sheaf_u, fi) +
                     " of a locally small map is not locally small";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // collection in sheaves: witnesses over dense covers
    AxiomResult r{"lemma:sheaf-collection", Status::Verified, "", 0, 0};
    int unwitnessed = 0;
    for (int fi = 0; fi < nmaps; ++fi) {
      if (!ls[fi]) continue;
      int xobj = sheaf_u.endpoints[fi].first;
      int aobj = sheaf_u.endpoints[fi].second;
      for (int di = 0; di < nmaps; ++di) {
        if (sheaf_u.endpoints[di].second != xobj) continue;
        if (!dense[di]) continue;
        ++r.checked;
        int pobj = sheaf_u.endpoints[di].first;
        bool found = false;
        for (int bobj = 0;
             bobj < static_cast<int>(sheaf_u.objects.size()) && !found;
             ++bobj)
          for (int hi : idx.between(bobj, aobj)) {
            if (found) break;
            if (!dense[hi]) continue;
            for (int yobj = 0;
                 yobj < static_cast<int>(sheaf_u.objects.size()) && !found;
                 ++yobj)
              for (int gi : idx.between(yobj, bobj)) {
                if (found) break;
                if (!ls[gi]) continue;
                for (int ki : idx.between(yobj, pobj)) {
                  NatTrans top = compose(sheaf_u.maps[di], sheaf_u.maps[ki]);
                  Square sq{top, sheaf_u.maps[gi], sheaf_u.maps[hi],
                            sheaf_u.maps[fi]};
                  if (!square_commutes(sq)) continue;
                  if (is_local_quasi_pullback(cl, sq)) {
                    found = true;
                    break;
                  }
                }
              }
          }
        if (!found) ++unwitnessed;
      }
    }
    if (unwitnessed > 0) {
      r.status = Status::UnknownWithinBounds;
      r.detail = std::to_string(unwitnessed) + " instances without witness";
    }
    out.push_back(std::move(r));
  }

  {  // local smallness is local: pullback along dense h with locally small
     // pulled-back leg forces the original map locally small
    AxiomResult r{"lemma:local-smallness-is-local", Status::Verified, "", 0, 0};
    for (int fi = 0; fi < nmaps && r.status == Status::Verified; ++fi) {
      int aobj = sheaf_u.endpoints[fi].second;
      for (int hi = 0; hi < nmaps && r.status == Status::Verified; ++hi) {
        if (sheaf_u.endpoints[hi].second != aobj) continue;
        if (!dense[hi]) continue;
        ++r.checked;
        LimitResult pb = pullback(sheaf_u.maps[hi], sheaf_u.maps[fi]);
        if (n.family(pb.projections[0]) && !ls[fi]) {
          r.status = Status::Counterexample;
          r.detail = map_label(sheaf_u, fi) +
                     " is not locally small though its pullback along dense " +
                     map_label(sheaf_u, hi) + " is";
        }
      }
    }
    out.push_back(std::move(r));
  }

  {  // sheafification sends (small) ambient maps to locally small maps
    AxiomResult r{"lemma:sheafification-locally-small", Status::Verified, "",
                  0, 0};
    for (std::size_t i = 0; i < ambient_u.maps.size(); ++i) {
      ++r.checked;
      NatTrans af = cache.map(ambient_u.maps[i]);
      if (!n.family(af)) {
        r.status = Status::Counterexample;
        r.detail = "sheafification of ambient map#" + std::to_string(i) +
                   " is not locally small";
        break;
      }
    }
    out.push_back(std::move(r));
  }

  return out;
}

}  // namespace finsite
