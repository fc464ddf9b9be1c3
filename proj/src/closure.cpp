#include "finsite/closure.hpp"

#include <algorithm>

namespace finsite {

Sieve ClosureContext::membership_sieve(const Subpresheaf& s, int a,
                                       int x) const {
  const FinCategory& c = *s.parent->cat;
  Sieve sv = empty_sieve(c, a);
  for (int m = 0; m < c.num_morphisms(); ++m)
    if (c.cod(m) == a && s.sel[c.dom(m)][s.parent->act(m, x)])
      sv.members[m] = true;
  return sv;
}

Subpresheaf ClosureContext::close(const Subpresheaf& s) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find({s.parent, s.sel});
    if (it != memo_.end()) {
      Subpresheaf r;
      r.parent = s.parent;
      r.sel = it->second;
      return r;
    }
  }
  const FinCategory& c = *s.parent->cat;
  Subpresheaf r = empty_sub(s.parent);
  for (int a = 0; a < c.num_objects(); ++a)
    for (int x = 0; x < s.parent->card[a]; ++x)
      r.sel[a][x] = j_.covers(a, membership_sieve(s, a, x));
  {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(std::make_pair(s.parent, s.sel), r.sel);
  }
  return r;
}

bool ClosureContext::is_closed(const Subpresheaf& s) const {
  return close(s) == s;
}

bool ClosureContext::is_dense_mono(const Subpresheaf& s) const {
  return close(s) == full_sub(s.parent);
}

bool ClosureContext::is_dense_map(const NatTrans& f) const {
  return is_dense_mono(image_factorization(f).image);
}

SmallDenseFactorization small_dense_factorization(
    const ClosureContext& ctx, const Subpresheaf& dense_mono) {
  if (!ctx.is_dense_mono(dense_mono))
    throw InputError("small_dense_factorization: the mono is not dense");
  const Presheaf& a_psh = *dense_mono.parent;
  const FinCategory& c = *a_psh.cat;
  const Coverage& j = ctx.coverage();

  SmallDenseFactorization out;
  out.domain = sub_to_presheaf(dense_mono);
  out.elems.resize(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o)
    for (const Sieve& p : j.sieves_at(o))
      for (int ae = 0; ae < a_psh.card[o]; ++ae) {
        bool ok = true;
        for (int m = 0; m < c.num_morphisms() && ok; ++m)
          if (p.members[m] && !dense_mono.sel[c.dom(m)][a_psh.act(m, ae)])
            ok = false;
        if (ok) out.elems[o].emplace_back(p, ae);
      }

  auto index_of = [&](int o, const Sieve& p, int ae) {
    const auto& v = out.elems[o];
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i].second == ae && v[i].first == p) return static_cast<int>(i);
    throw InputError("small_dense_factorization: element lookup failed");
  };

  std::vector<int> card(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o)
    card[o] = static_cast<int>(out.elems[o].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      const auto& [p, ae] = out.elems[from][i];
      action[m][i] =
          index_of(to, restrict_sieve(c, p, m), a_psh.act(m, ae));
    }
  }
  out.bprime = make_presheaf(dense_mono.parent->cat, std::move(card),
                             std::move(action));

  NatTrans mono;
  mono.src = out.domain.psh;
  mono.dst = out.bprime;
  mono.comp.resize(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    mono.comp[o].resize(out.domain.psh->card[o]);
    for (int i = 0; i < out.domain.psh->card[o]; ++i)
      mono.comp[o][i] =
          index_of(o, maximal_sieve(c, o), out.domain.elems[o][i]);
  }
  out.mono = std::move(mono);

  NatTrans epi;
  epi.src = out.bprime;
  epi.dst = dense_mono.parent;
  epi.comp.resize(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    epi.comp[o].resize(out.bprime->card[o]);
    for (std::size_t i = 0; i < out.elems[o].size(); ++i)
      epi.comp[o][i] = out.elems[o][i].second;
  }
  out.epi = std::move(epi);
  return out;
}

bool square_commutes(const Square& sq) {
  return compose(sq.right, sq.top).comp == compose(sq.bottom, sq.left).comp;
}

NatTrans pullback_comparison(const Square& sq, const LimitResult& pb) {
  // Invert the pullback's projection pair to index apex elements.
  const NatTrans& to_b = pb.projections[0];
  const NatTrans& to_x = pb.projections[1];
  const FinCategory& c = *sq.top.src->cat;
  NatTrans cmp;
  cmp.src = sq.top.src;
  cmp.dst = pb.apex;
  cmp.comp.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    std::map<std::pair<int, int>, int> lookup;
    for (int e = 0; e < pb.apex->card[a]; ++e)
      lookup[{to_b.at(a, e), to_x.at(a, e)}] = e;
    cmp.comp[a].resize(sq.top.src->card[a]);
    for (int y = 0; y < sq.top.src->card[a]; ++y) {
      auto it = lookup.find({sq.left.at(a, y), sq.top.at(a, y)});
      if (it == lookup.end())
        throw InputError("pullback_comparison: square does not commute");
      cmp.comp[a][y] = it->second;
    }
  }
  return cmp;
}

bool is_local_quasi_pullback(const ClosureContext& ctx, const Square& sq) {
  if (!square_commutes(sq))
    throw InputError("is_local_quasi_pullback: square does not commute");
  LimitResult pb = pullback(sq.bottom, sq.right);
  return ctx.is_dense_map(pullback_comparison(sq, pb));
}

bool is_quasi_pullback(const Square& sq) {
  if (!square_commutes(sq))
    throw InputError("is_quasi_pullback: square does not commute");
  LimitResult pb = pullback(sq.bottom, sq.right);
  return is_epi(pullback_comparison(sq, pb));
}

bool is_pullback_square(const Square& sq) {
  if (!square_commutes(sq)) return false;
  LimitResult pb = pullback(sq.bottom, sq.right);
  return is_iso(pullback_comparison(sq, pb));
}

}  // namespace finsite
