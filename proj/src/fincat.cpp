#include "finsite/fincat.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace finsite {

std::vector<int> FinCategory::hom_into(int a) const {
  std::vector<int> out;
  for (int m = 0; m < num_morphisms(); ++m)
    if (cod(m) == a) out.push_back(m);
  return out;
}

std::vector<int> FinCategory::hom(int b, int a) const {
  std::vector<int> out;
  for (int m = 0; m < num_morphisms(); ++m)
    if (dom(m) == b && cod(m) == a) out.push_back(m);
  return out;
}

std::vector<std::string> validate_category(const FinCategory& c) {
  const int no = c.num_objects();
  const int nm = c.num_morphisms();
  if (static_cast<int>(c.identity.size()) != no)
    throw InputError("identity table has wrong length");
  if (static_cast<int>(c.table.size()) != nm)
    throw InputError("composition table has wrong height");
  for (const auto& row : c.table)
    if (static_cast<int>(row.size()) != nm)
      throw InputError("composition table has a ragged row");
  for (const auto& m : c.morphisms)
    if (m.dom < 0 || m.dom >= no || m.cod < 0 || m.cod >= no)
      throw InputError("morphism with out-of-range endpoint: " + m.name);
  for (int a = 0; a < no; ++a) {
    int e = c.identity[a];
    if (e < 0 || e >= nm) throw InputError("identity index out of range");
    if (c.dom(e) != a || c.cod(e) != a)
      throw InputError("identity of " + c.object_names[a] +
                       " is not an endomorphism");
  }
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      int gf = c.table[g][f];
      bool composable = c.cod(f) == c.dom(g);
      if (!composable) {
        if (gf != -1) throw InputError("table entry for non-composable pair");
        continue;
      }
      if (gf < 0 || gf >= nm)
        throw InputError("composition table entry out of range");
      if (c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g))
        throw InputError("composite with wrong endpoints in table");
    }

  std::vector<std::string> report;
  auto name = [&](int m) { return c.morphisms[m].name; };
  for (int f = 0; f < nm; ++f) {
    if (c.compose(c.identity[c.cod(f)], f) != f)
      report.push_back("identity law fails: id∘" + name(f) + " ≠ " + name(f));
    if (c.compose(f, c.identity[c.dom(f)]) != f)
      report.push_back("identity law fails: " + name(f) + "∘id ≠ " + name(f));
  }
  for (int h = 0; h < nm; ++h)
    for (int g = 0; g < nm; ++g) {
      if (c.cod(g) != c.dom(h)) continue;
      for (int f = 0; f < nm; ++f) {
        if (c.cod(f) != c.dom(g)) continue;
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          report.push_back("associativity fails on (" + name(h) + ", " +
                           name(g) + ", " + name(f) + ")");
      }
    }
  return report;
}

FinCategory make_terminal_category() {
  FinCategory c;
  c.object_names = {"*"};
  c.morphisms = {{0, 0, "id"}};
  c.identity = {0};
  c.table = {{0}};
  return c;
}

FinCategory make_poset_category(int n,
                                const std::vector<std::pair<int, int>>& le) {
  // Reflexive-transitive closure of the declared relation.
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) rel[i][i] = true;
  for (auto [a, b] : le) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw InputError("poset relation out of range");
    rel[a][b] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rel[i][k] && rel[k][j]) rel[i][j] = true;

  FinCategory c;
  for (int i = 0; i < n; ++i) c.object_names.push_back(std::to_string(i));
  std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rel[i][j]) {
        arrow[i][j] = c.num_morphisms();
        std::string nm = i == j ? "id" + std::to_string(i)
                                : "le_" + std::to_string(i) + "_" +
                                      std::to_string(j);
        c.morphisms.push_back({i, j, nm});
      }
  c.identity.resize(n);
  for (int i = 0; i < n; ++i) c.identity[i] = arrow[i][i];
  int nm = c.num_morphisms();
  c.table.assign(nm, std::vector<int>(nm, -1));
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f)
      if (c.cod(f) == c.dom(g)) c.table[g][f] = arrow[c.dom(f)][c.cod(g)];
  return c;
}

FinCategory make_monoid_category(const std::vector<std::string>& elements,
                                 int identity_index,
                                 const std::vector<std::vector<int>>& mult) {
  FinCategory c;
  c.object_names = {"*"};
  for (const auto& e : elements) c.morphisms.push_back({0, 0, e});
  c.identity = {identity_index};
  c.table = mult;
  return c;
}

int Presheaf::total_elements() const {
  return std::accumulate(card.begin(), card.end(), 0);
}

std::vector<std::string> validate_presheaf(const Presheaf& x) {
  const FinCategory& c = *x.cat;
  if (static_cast<int>(x.card.size()) != c.num_objects())
    throw InputError("presheaf carrier list has wrong length");
  if (static_cast<int>(x.action.size()) != c.num_morphisms())
    throw InputError("presheaf action list has wrong length");
  for (int m = 0; m < c.num_morphisms(); ++m) {
    if (static_cast<int>(x.action[m].size()) != x.card[c.cod(m)])
      throw InputError("action of " + c.morphisms[m].name +
                       " has wrong domain size");
    for (int v : x.action[m])
      if (v < 0 || v >= x.card[c.dom(m)])
        throw InputError("action of " + c.morphisms[m].name +
                         " has out-of-range value");
  }
  std::vector<std::string> report;
  for (int a = 0; a < c.num_objects(); ++a)
    for (int e = 0; e < x.card[a]; ++e)
      if (x.act(c.identity[a], e) != e) {
        report.push_back("identity action is not the identity at object " +
                         c.object_names[a]);
        break;
      }
  for (int phi = 0; phi < c.num_morphisms(); ++phi)
    for (int psi = 0; psi < c.num_morphisms(); ++psi) {
      if (c.cod(psi) != c.dom(phi)) continue;
      int comp = c.compose(phi, psi);
      for (int e = 0; e < x.card[c.cod(phi)]; ++e)
        if (x.act(comp, e) != x.act(psi, x.act(phi, e))) {
          report.push_back("functoriality fails on (" +
                           c.morphisms[phi].name + ", " +
                           c.morphisms[psi].name + ")");
          break;
        }
    }
  return report;
}

PshPtr make_presheaf(CatPtr cat, std::vector<int> card,
                     std::vector<std::vector<int>> action) {
  auto p = std::make_shared<Presheaf>();
  p->cat = std::move(cat);
  p->card = std::move(card);
  p->action = std::move(action);
  auto bad = validate_presheaf(*p);
  if (!bad.empty()) throw InputError("invalid presheaf: " + bad.front());
  return p;
}

PshPtr constant_presheaf(CatPtr cat, int n) {
  std::vector<int> card(cat->num_objects(), n);
  std::vector<std::vector<int>> action(cat->num_morphisms());
  for (int m = 0; m < cat->num_morphisms(); ++m) {
    action[m].resize(n);
    for (int i = 0; i < n; ++i) action[m][i] = i;
  }
  return make_presheaf(std::move(cat), std::move(card), std::move(action));
}

PshPtr terminal_presheaf(CatPtr cat) { return constant_presheaf(cat, 1); }
PshPtr initial_presheaf(CatPtr cat) { return constant_presheaf(cat, 0); }

PshPtr yoneda(CatPtr cat, int a) {
  const FinCategory& c = *cat;
  std::vector<std::vector<int>> homs(c.num_objects());
  for (int b = 0; b < c.num_objects(); ++b) homs[b] = c.hom(b, a);
  std::vector<int> card(c.num_objects());
  for (int b = 0; b < c.num_objects(); ++b)
    card[b] = static_cast<int>(homs[b].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int psi = 0; psi < c.num_morphisms(); ++psi) {
    int from = c.cod(psi), to = c.dom(psi);
    action[psi].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      int composite = c.compose(homs[from][i], psi);
      auto& h = homs[to];
      action[psi][i] = static_cast<int>(
          std::find(h.begin(), h.end(), composite) - h.begin());
    }
  }
  return make_presheaf(std::move(cat), std::move(card), std::move(action));
}

int yoneda_index(const FinCategory& c, int a, int phi) {
  auto h = c.hom(c.dom(phi), a);
  return static_cast<int>(std::find(h.begin(), h.end(), phi) - h.begin());
}

bool is_natural(const NatTrans& f) {
  const FinCategory& c = *f.src->cat;
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int a = c.cod(m);
    for (int x = 0; x < f.src->card[a]; ++x)
      if (f.dst->act(m, f.at(a, x)) != f.at(c.dom(m), f.src->act(m, x)))
        return false;
  }
  return true;
}

NatTrans identity_nat(PshPtr x) {
  NatTrans t;
  t.src = x;
  t.dst = x;
  t.comp.resize(x->card.size());
  for (std::size_t a = 0; a < x->card.size(); ++a) {
    t.comp[a].resize(x->card[a]);
    std::iota(t.comp[a].begin(), t.comp[a].end(), 0);
  }
  return t;
}

NatTrans compose(const NatTrans& g, const NatTrans& f) {
  NatTrans t;
  t.src = f.src;
  t.dst = g.dst;
  t.comp.resize(f.comp.size());
  for (std::size_t a = 0; a < f.comp.size(); ++a) {
    t.comp[a].resize(f.comp[a].size());
    for (std::size_t x = 0; x < f.comp[a].size(); ++x)
      t.comp[a][x] = g.comp[a][f.comp[a][x]];
  }
  return t;
}

bool is_mono(const NatTrans& f) {
  for (std::size_t a = 0; a < f.comp.size(); ++a) {
    std::vector<bool> seen(f.dst->card[a], false);
    for (int v : f.comp[a]) {
      if (seen[v]) return false;
      seen[v] = true;
    }
  }
  return true;
}

bool is_epi(const NatTrans& f) {
  for (std::size_t a = 0; a < f.comp.size(); ++a) {
    std::vector<bool> seen(f.dst->card[a], false);
    for (int v : f.comp[a]) seen[v] = true;
    for (bool b : seen)
      if (!b) return false;
  }
  return true;
}

bool is_iso(const NatTrans& f) { return is_mono(f) && is_epi(f); }

NatTrans inverse(const NatTrans& f) {
  NatTrans t;
  t.src = f.dst;
  t.dst = f.src;
  t.comp.resize(f.comp.size());
  for (std::size_t a = 0; a < f.comp.size(); ++a) {
    t.comp[a].assign(f.dst->card[a], -1);
    for (std::size_t x = 0; x < f.comp[a].size(); ++x)
      t.comp[a][f.comp[a][x]] = static_cast<int>(x);
  }
  return t;
}

namespace {

// Shared backtracking core for map enumeration. Components are assigned in
// (object, element) order; after each assignment every naturality equation
// whose two sides are both determined is checked.
struct MapSearch {
  const Presheaf& x;
  const Presheaf& y;
  const FinCategory& c;
  bool bijective;                        // restrict to pointwise bijections
  std::vector<std::vector<int>> comp;
  std::vector<std::vector<bool>> used;   // per object, for bijective mode
  std::size_t limit = 0;
  std::vector<NatTrans> out;
  PshPtr xp, yp;

  bool consistent(int a, int e) {
    for (int m = 0; m < c.num_morphisms(); ++m) {
      int v = -1;
      if (c.cod(m) == a) {
        int b = c.dom(m);
        int xe = x.act(m, e);
        if (comp[b][xe] != -1 && y.act(m, comp[a][e]) != comp[b][xe])
          return false;
        (void)v;
      }
      if (c.dom(m) == a) {
        int s = c.cod(m);
        for (int e2 = 0; e2 < x.card[s]; ++e2) {
          if (comp[s][e2] == -1) continue;
          if (x.act(m, e2) == e && y.act(m, comp[s][e2]) != comp[a][e])
            return false;
        }
      }
    }
    return true;
  }

  bool run(int a, int e) {
    if (a == static_cast<int>(x.card.size())) {
      NatTrans t;
      t.src = xp;
      t.dst = yp;
      t.comp = comp;
      out.push_back(std::move(t));
      return limit != 0 && out.size() >= limit;
    }
    if (e == x.card[a]) return run(a + 1, 0);
    if (comp[a][e] != -1) {
      if (!consistent(a, e)) return false;
      return run(a, e + 1);
    }
    for (int v = 0; v < y.card[a]; ++v) {
      if (bijective && used[a][v]) continue;
      comp[a][e] = v;
      if (bijective) used[a][v] = true;
      if (consistent(a, e)) {
        if (run(a, e + 1)) return true;
      }
      if (bijective) used[a][v] = false;
      comp[a][e] = -1;
    }
    return false;
  }
};

}  // namespace

std::vector<NatTrans> enumerate_nat_trans(
    PshPtr x, PshPtr y, const std::vector<std::vector<int>>& partial,
    std::size_t limit) {
  MapSearch s{*x, *y, *x->cat, false, {}, {}, limit, {}, x, y};
  s.comp.resize(x->card.size());
  for (std::size_t a = 0; a < x->card.size(); ++a)
    s.comp[a].assign(x->card[a], -1);
  if (!partial.empty()) s.comp = partial;
  s.run(0, 0);
  return std::move(s.out);
}

std::optional<NatTrans> find_iso(PshPtr x, PshPtr y,
                                 const std::vector<std::vector<int>>& partial) {
  if (x->card != y->card) return std::nullopt;
  MapSearch s{*x, *y, *x->cat, true, {}, {}, 1, {}, x, y};
  s.comp.resize(x->card.size());
  s.used.resize(x->card.size());
  for (std::size_t a = 0; a < x->card.size(); ++a) {
    s.comp[a].assign(x->card[a], -1);
    s.used[a].assign(y->card[a], false);
  }
  if (!partial.empty()) {
    s.comp = partial;
    for (std::size_t a = 0; a < s.comp.size(); ++a)
      for (int v : s.comp[a])
        if (v != -1) {
          if (s.used[a][v]) return std::nullopt;   // pinned map not injective
          s.used[a][v] = true;
        }
  }
  s.run(0, 0);
  if (s.out.empty()) return std::nullopt;
  return s.out.front();
}

int Product::tuple_index(int a, const std::vector<int>& coords_) const {
  int idx = 0;
  for (std::size_t i = 0; i < factors.size(); ++i)
    idx = idx * factors[i]->card[a] + coords_[i];
  return idx;
}

std::vector<int> Product::coords(int a, int idx) const {
  std::vector<int> out(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    int n = factors[i]->card[a];
    out[i] = idx % n;
    idx /= n;
  }
  return out;
}

NatTrans Product::projection(int i) const {
  NatTrans t;
  t.src = psh;
  t.dst = factors[i];
  t.comp.resize(psh->card.size());
  for (std::size_t a = 0; a < psh->card.size(); ++a) {
    t.comp[a].resize(psh->card[a]);
    for (int e = 0; e < psh->card[a]; ++e)
      t.comp[a][e] = coords(static_cast<int>(a), e)[i];
  }
  return t;
}

Product make_product(CatPtr cat, std::vector<PshPtr> factors) {
  const FinCategory& c = *cat;
  Product p;
  p.factors = factors;
  std::vector<int> card(c.num_objects(), 1);
  for (int a = 0; a < c.num_objects(); ++a)
    for (const auto& f : factors) card[a] *= f->card[a];
  std::vector<std::vector<int>> action(c.num_morphisms());
  // Temporary product shell so coords/tuple_index work while filling.
  auto shell = std::make_shared<Presheaf>();
  shell->cat = cat;
  shell->card = card;
  p.psh = shell;
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int e = 0; e < card[from]; ++e) {
      auto cs = p.coords(from, e);
      for (std::size_t i = 0; i < factors.size(); ++i)
        cs[i] = factors[i]->act(m, cs[i]);
      action[m][e] = p.tuple_index(to, cs);
    }
  }
  p.psh = make_presheaf(cat, std::move(card), std::move(action));
  return p;
}

NatTrans tuple_map(const Product& p, const std::vector<NatTrans>& fs) {
  NatTrans t;
  t.src = fs.front().src;
  t.dst = p.psh;
  t.comp.resize(t.src->card.size());
  for (std::size_t a = 0; a < t.src->card.size(); ++a) {
    t.comp[a].resize(t.src->card[a]);
    for (int e = 0; e < t.src->card[a]; ++e) {
      std::vector<int> cs(fs.size());
      for (std::size_t i = 0; i < fs.size(); ++i) cs[i] = fs[i].at(a, e);
      t.comp[a][e] = p.tuple_index(static_cast<int>(a), cs);
    }
  }
  return t;
}

namespace {

NatTrans compose_path(const PresheafDiagram& d, const std::vector<int>& path,
                      int src_node) {
  NatTrans acc = identity_nat(d.nodes[src_node]);
  for (int idx : path) acc = compose(d.arrows[idx].t, acc);
  return acc;
}

}  // namespace

bool diagram_commutes(const PresheafDiagram& d) {
  for (const auto& [p, q] : d.equations) {
    int src = p.empty() ? (q.empty() ? 0 : d.arrows[q.front()].src)
                        : d.arrows[p.front()].src;
    NatTrans lhs = compose_path(d, p, src);
    NatTrans rhs = compose_path(d, q, src);
    if (!(lhs.comp == rhs.comp)) return false;
  }
  return true;
}

LimitResult limit(const PresheafDiagram& d) {
  if (!diagram_commutes(d))
    throw InputError("limit: diagram violates a declared equation");
  CatPtr cat = d.nodes.empty() ? nullptr : d.nodes.front()->cat;
  if (!cat) throw InputError("limit of an empty diagram needs a category");
  Product all = make_product(cat, d.nodes);
  const FinCategory& c = *cat;
  // Select the tuples satisfying every arrow equation.
  std::vector<std::vector<int>> keep(c.num_objects());
  std::vector<std::vector<int>> back(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    back[a].assign(all.psh->card[a], -1);
    for (int e = 0; e < all.psh->card[a]; ++e) {
      auto cs = all.coords(a, e);
      bool ok = true;
      for (const auto& ar : d.arrows)
        if (ar.t.at(a, cs[ar.src]) != cs[ar.dst]) {
          ok = false;
          break;
        }
      if (ok) {
        back[a][e] = static_cast<int>(keep[a].size());
        keep[a].push_back(e);
      }
    }
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(keep[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i)
      action[m][i] = back[to][all.psh->act(m, keep[from][i])];
  }
  LimitResult r;
  r.apex = make_presheaf(cat, std::move(card), std::move(action));
  for (std::size_t n = 0; n < d.nodes.size(); ++n) {
    NatTrans pr;
    pr.src = r.apex;
    pr.dst = d.nodes[n];
    pr.comp.resize(c.num_objects());
    for (int a = 0; a < c.num_objects(); ++a) {
      pr.comp[a].resize(r.apex->card[a]);
      for (int i = 0; i < r.apex->card[a]; ++i)
        pr.comp[a][i] = all.coords(a, keep[a][i])[n];
    }
    r.projections.push_back(std::move(pr));
  }
  return r;
}

namespace {

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  int find(int i) {
    while (up[i] != i) i = up[i] = up[up[i]];
    return i;
  }
  void unite(int i, int j) {
    i = find(i);
    j = find(j);
    if (i == j) return;
    if (i < j) std::swap(i, j);   // keep the smaller index as root
    up[i] = j;
  }
};

}  // namespace

ColimitResult colimit(const PresheafDiagram& d) {
  if (!diagram_commutes(d))
    throw InputError("colimit: diagram violates a declared equation");
  CatPtr cat = d.nodes.empty() ? nullptr : d.nodes.front()->cat;
  if (!cat) throw InputError("colimit of an empty diagram needs a category");
  const FinCategory& c = *cat;
  // Flatten the disjoint union per object: offset[n][a] + element.
  std::vector<std::vector<int>> offset(d.nodes.size(),
                                       std::vector<int>(c.num_objects(), 0));
  std::vector<int> total(c.num_objects(), 0);
  for (std::size_t n = 0; n < d.nodes.size(); ++n)
    for (int a = 0; a < c.num_objects(); ++a) {
      offset[n][a] = total[a];
      total[a] += d.nodes[n]->card[a];
    }
  std::vector<UnionFind> uf;
  uf.reserve(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) uf.emplace_back(total[a]);
  for (const auto& ar : d.arrows)
    for (int a = 0; a < c.num_objects(); ++a)
      for (int e = 0; e < d.nodes[ar.src]->card[a]; ++e)
        uf[a].unite(offset[ar.src][a] + e, offset[ar.dst][a] + ar.t.at(a, e));
  // Carrier = class roots in increasing order.
  std::vector<std::vector<int>> root_index(c.num_objects());
  std::vector<int> card(c.num_objects(), 0);
  for (int a = 0; a < c.num_objects(); ++a) {
    root_index[a].assign(total[a], -1);
    for (int i = 0; i < total[a]; ++i)
      if (uf[a].find(i) == i) root_index[a][i] = card[a]++;
  }
  auto cls = [&](int a, int i) { return root_index[a][uf[a].find(i)]; };
  // Action descends: restrict any member of the class.
  std::vector<std::vector<int>> flat_act(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m);
    flat_act[m].assign(total[from], -1);
    for (std::size_t n = 0; n < d.nodes.size(); ++n)
      for (int e = 0; e < d.nodes[n]->card[from]; ++e)
        flat_act[m][offset[n][from] + e] =
            offset[n][c.dom(m)] + d.nodes[n]->act(m, e);
  }
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].assign(card[from], -1);
    for (int i = 0; i < total[from]; ++i) {
      int k = cls(from, i);
      int v = cls(to, flat_act[m][i]);
      if (action[m][k] == -1) action[m][k] = v;
      // Presheaf colimits are pointwise, so representatives agree; if two
      // members of one class restricted differently the caller built a
      // non-diagram. Guard anyway.
      else if (action[m][k] != v)
        throw InputError("colimit action is not well-defined");
    }
  }
  ColimitResult r;
  r.apex = make_presheaf(cat, std::move(card), std::move(action));
  for (std::size_t n = 0; n < d.nodes.size(); ++n) {
    NatTrans in;
    in.src = d.nodes[n];
    in.dst = r.apex;
    in.comp.resize(c.num_objects());
    for (int a = 0; a < c.num_objects(); ++a) {
      in.comp[a].resize(d.nodes[n]->card[a]);
      for (int e = 0; e < d.nodes[n]->card[a]; ++e)
        in.comp[a][e] = cls(a, offset[n][a] + e);
    }
    r.injections.push_back(std::move(in));
  }
  return r;
}

LimitResult binary_product(PshPtr x, PshPtr y) {
  PresheafDiagram d;
  d.nodes = {x, y};
  return limit(d);
}

LimitResult equalizer(const NatTrans& f, const NatTrans& g) {
  // Carved out of the source as the subobject where f = g.
  const FinCategory& c = *f.src->cat;
  std::vector<std::vector<int>> keep(c.num_objects());
  std::vector<std::vector<int>> back(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    back[a].assign(f.src->card[a], -1);
    for (int e = 0; e < f.src->card[a]; ++e)
      if (f.at(a, e) == g.at(a, e)) {
        back[a][e] = static_cast<int>(keep[a].size());
        keep[a].push_back(e);
      }
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(keep[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i)
      action[m][i] = back[to][f.src->act(m, keep[from][i])];
  }
  LimitResult r;
  r.apex = make_presheaf(f.src->cat, std::move(card), std::move(action));
  NatTrans incl;
  incl.src = r.apex;
  incl.dst = f.src;
  incl.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) incl.comp[a] = keep[a];
  r.projections = {std::move(incl)};
  return r;
}

LimitResult pullback(const NatTrans& f, const NatTrans& g) {
  if (!(*f.dst == *g.dst)) throw InputError("pullback: targets differ");
  PresheafDiagram d;
  d.nodes = {f.src, g.src, f.dst};
  d.arrows.push_back({0, 2, f});
  d.arrows.push_back({1, 2, g});
  LimitResult full = limit(d);
  full.projections.pop_back();   // keep the two legs
  return full;
}

ColimitResult binary_coproduct(PshPtr x, PshPtr y) {
  PresheafDiagram d;
  d.nodes = {x, y};
  return colimit(d);
}

ColimitResult coequalizer(const NatTrans& f, const NatTrans& g) {
  PresheafDiagram d;
  d.nodes = {f.src, f.dst};
  d.arrows.push_back({0, 1, f});
  d.arrows.push_back({0, 1, g});
  ColimitResult whole = colimit(d);
  ColimitResult r;
  r.apex = whole.apex;
  r.injections = {whole.injections[1]};   // the quotient map from the target
  return r;
}

int Subpresheaf::count() const {
  int n = 0;
  for (const auto& row : sel)
    for (bool b : row) n += b;
  return n;
}

bool Subpresheaf::subset_of(const Subpresheaf& o) const {
  for (std::size_t a = 0; a < sel.size(); ++a)
    for (std::size_t x = 0; x < sel[a].size(); ++x)
      if (sel[a][x] && !o.sel[a][x]) return false;
  return true;
}

bool is_restriction_stable(const Subpresheaf& s) {
  const FinCategory& c = *s.parent->cat;
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int a = c.cod(m), b = c.dom(m);
    for (int x = 0; x < s.parent->card[a]; ++x)
      if (s.sel[a][x] && !s.sel[b][s.parent->act(m, x)]) return false;
  }
  return true;
}

Subpresheaf full_sub(PshPtr x) {
  Subpresheaf s;
  s.parent = x;
  s.sel.resize(x->card.size());
  for (std::size_t a = 0; a < x->card.size(); ++a)
    s.sel[a].assign(x->card[a], true);
  return s;
}

Subpresheaf empty_sub(PshPtr x) {
  Subpresheaf s;
  s.parent = x;
  s.sel.resize(x->card.size());
  for (std::size_t a = 0; a < x->card.size(); ++a)
    s.sel[a].assign(x->card[a], false);
  return s;
}

ReifiedSub sub_to_presheaf(const Subpresheaf& s) {
  const FinCategory& c = *s.parent->cat;
  ReifiedSub r;
  r.elems.resize(c.num_objects());
  std::vector<std::vector<int>> back(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    back[a].assign(s.parent->card[a], -1);
    for (int x = 0; x < s.parent->card[a]; ++x)
      if (s.sel[a][x]) {
        back[a][x] = static_cast<int>(r.elems[a].size());
        r.elems[a].push_back(x);
      }
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(r.elems[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      int img = s.parent->act(m, r.elems[from][i]);
      if (back[to][img] < 0)
        throw InputError("subobject is not restriction-stable");
      action[m][i] = back[to][img];
    }
  }
  r.psh = make_presheaf(s.parent->cat, std::move(card), std::move(action));
  NatTrans incl;
  incl.src = r.psh;
  incl.dst = s.parent;
  incl.comp = r.elems;
  r.incl = std::move(incl);
  return r;
}

std::vector<Subpresheaf> enumerate_subobjects(PshPtr x) {
  const FinCategory& c = *x->cat;
  int total = x->total_elements();
  if (total > 24) throw InputError("subobject enumeration cap exceeded");
  // Element (a, i) maps to bit position offset[a] + i.
  std::vector<int> offset(c.num_objects(), 0);
  for (int a = 1; a < c.num_objects(); ++a)
    offset[a] = offset[a - 1] + x->card[a - 1];
  std::vector<Subpresheaf> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    Subpresheaf s = empty_sub(x);
    for (int a = 0; a < c.num_objects(); ++a)
      for (int i = 0; i < x->card[a]; ++i)
        s.sel[a][i] = (mask >> (offset[a] + i)) & 1;
    if (is_restriction_stable(s)) out.push_back(std::move(s));
  }
  return out;
}

QuotientResult quotient_by_equivalence(const Product& prod,
                                       const Subpresheaf& r) {
  PshPtr x = prod.factors.at(0);
  if (prod.factors.size() != 2 || !(*prod.factors[1] == *x))
    throw InputError("quotient: relation parent must be X×X");
  if (!(*r.parent == *prod.psh))
    throw InputError("quotient: relation is not a subobject of X×X");
  const FinCategory& c = *x->cat;
  auto rel = [&](int a, int p, int q) {
    return r.sel[a][prod.tuple_index(a, {p, q})];
  };
  for (int a = 0; a < c.num_objects(); ++a) {
    for (int p = 0; p < x->card[a]; ++p) {
      if (!rel(a, p, p))
        throw InputError("quotient: relation not reflexive at (" +
                         std::to_string(a) + "," + std::to_string(p) + ")");
      for (int q = 0; q < x->card[a]; ++q) {
        if (rel(a, p, q) && !rel(a, q, p))
          throw InputError("quotient: relation not symmetric at (" +
                           std::to_string(a) + "," + std::to_string(p) + "," +
                           std::to_string(q) + ")");
        for (int s = 0; s < x->card[a]; ++s)
          if (rel(a, p, q) && rel(a, q, s) && !rel(a, p, s))
            throw InputError("quotient: relation not transitive at (" +
                             std::to_string(a) + "," + std::to_string(p) +
                             "," + std::to_string(q) + "," +
                             std::to_string(s) + ")");
      }
    }
  }
  std::vector<UnionFind> uf;
  for (int a = 0; a < c.num_objects(); ++a) {
    uf.emplace_back(x->card[a]);
    for (int p = 0; p < x->card[a]; ++p)
      for (int q = p + 1; q < x->card[a]; ++q)
        if (rel(a, p, q)) uf[a].unite(p, q);
  }
  std::vector<std::vector<int>> root_index(c.num_objects());
  std::vector<int> card(c.num_objects(), 0);
  for (int a = 0; a < c.num_objects(); ++a) {
    root_index[a].assign(x->card[a], -1);
    for (int i = 0; i < x->card[a]; ++i)
      if (uf[a].find(i) == i) root_index[a][i] = card[a]++;
  }
  auto cls = [&](int a, int i) { return root_index[a][uf[a].find(i)]; };
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].assign(card[from], -1);
    for (int i = 0; i < x->card[from]; ++i) {
      int k = cls(from, i), v = cls(to, x->act(m, i));
      if (action[m][k] == -1) action[m][k] = v;
      else if (action[m][k] != v)
        throw InputError("quotient: relation is not a congruence");
    }
  }
  QuotientResult qr;
  qr.psh = make_presheaf(x->cat, std::move(card), std::move(action));
  NatTrans proj;
  proj.src = x;
  proj.dst = qr.psh;
  proj.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    proj.comp[a].resize(x->card[a]);
    for (int i = 0; i < x->card[a]; ++i) proj.comp[a][i] = cls(a, i);
  }
  qr.proj = std::move(proj);
  return qr;
}

ImageFactorization image_factorization(const NatTrans& f) {
  Subpresheaf img = empty_sub(f.dst);
  for (std::size_t a = 0; a < f.comp.size(); ++a)
    for (int v : f.comp[a]) img.sel[a][v] = true;
  ReifiedSub re = sub_to_presheaf(img);
  const FinCategory& c = *f.src->cat;
  std::vector<std::vector<int>> back(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    back[a].assign(f.dst->card[a], -1);
    for (std::size_t i = 0; i < re.elems[a].size(); ++i)
      back[a][re.elems[a][i]] = static_cast<int>(i);
  }
  NatTrans epi;
  epi.src = f.src;
  epi.dst = re.psh;
  epi.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    epi.comp[a].resize(f.src->card[a]);
    for (int x = 0; x < f.src->card[a]; ++x)
      epi.comp[a][x] = back[a][f.at(a, x)];
  }
  return {std::move(epi), std::move(img), std::move(re.incl)};
}

std::vector<PshPtr> enumerate_presheaves(CatPtr cat, int max_card) {
  const FinCategory& c = *cat;
  std::vector<PshPtr> out;
  std::vector<int> card(c.num_objects(), 0);
  // Enumerate carrier sizes, then all action tables, keeping functorial ones.
  auto next_card = [&]() {
    for (int a = 0; a < c.num_objects(); ++a) {
      if (card[a] < max_card) {
        ++card[a];
        return true;
      }
      card[a] = 0;
    }
    return false;
  };
  do {
    // All candidate tables for each non-identity morphism; identities fixed.
    std::vector<int> free_morphs;
    for (int m = 0; m < c.num_morphisms(); ++m) {
      bool is_id = false;
      for (int a = 0; a < c.num_objects(); ++a)
        if (c.identity[a] == m) is_id = true;
      if (!is_id) free_morphs.push_back(m);
    }
    std::vector<std::vector<std::vector<int>>> choices(free_morphs.size());
    for (std::size_t i = 0; i < free_morphs.size(); ++i) {
      int m = free_morphs[i];
      int from = card[c.cod(m)], to = card[c.dom(m)];
      std::vector<int> table(from, 0);
      if (from > 0 && to == 0) {
        choices[i] = {};   // no total map into an empty set
        continue;
      }
      while (true) {
        choices[i].push_back(table);
        int j = 0;
        for (; j < from; ++j) {
          if (table[j] + 1 < to) {
            ++table[j];
            break;
          }
          table[j] = 0;
        }
        if (j == from) break;
      }
      if (from == 0) choices[i] = {std::vector<int>{}};
    }
    bool feasible = true;
    for (std::size_t i = 0; i < free_morphs.size(); ++i)
      if (choices[i].empty()) feasible = false;
    if (!feasible) continue;
    std::vector<std::size_t> pick(free_morphs.size(), 0);
    while (true) {
      std::vector<std::vector<int>> action(c.num_morphisms());
      for (int a = 0; a < c.num_objects(); ++a) {
        action[c.identity[a]].resize(card[a]);
        std::iota(action[c.identity[a]].begin(),
                  action[c.identity[a]].end(), 0);
      }
      for (std::size_t i = 0; i < free_morphs.size(); ++i)
        action[free_morphs[i]] = choices[i][pick[i]];
      Presheaf cand;
      cand.cat = cat;
      cand.card = card;
      cand.action = action;
      bool ok = true;
      try {
        ok = validate_presheaf(cand).empty();
      } catch (const InputError&) {
        ok = false;
      }
      if (ok)
        out.push_back(std::make_shared<Presheaf>(std::move(cand)));
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (pick[i] + 1 < choices[i].size()) {
          ++pick[i];
          break;
        }
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
  } while (next_card());
  return out;
}

}  // namespace finsite
