#include "finsite/site.hpp"

#include <algorithm>

#include "finsite/logic.hpp"

namespace finsite {

Sieve maximal_sieve(const FinCategory& c, int a) {
  Sieve s;
  s.base = a;
  s.members.assign(c.num_morphisms(), false);
  for (int m = 0; m < c.num_morphisms(); ++m)
    if (c.cod(m) == a) s.members[m] = true;
  return s;
}

Sieve empty_sieve(const FinCategory& c, int a) {
  Sieve s;
  s.base = a;
  s.members.assign(c.num_morphisms(), false);
  return s;
}

bool is_precomposition_closed(const FinCategory& c, const Sieve& s) {
  for (int phi = 0; phi < c.num_morphisms(); ++phi) {
    if (!s.members[phi]) continue;
    if (c.cod(phi) != s.base) return false;
    for (int psi = 0; psi < c.num_morphisms(); ++psi)
      if (c.cod(psi) == c.dom(phi) && !s.members[c.compose(phi, psi)])
        return false;
  }
  return true;
}

Sieve make_sieve(const FinCategory& c, int a, const std::vector<int>& members) {
  Sieve s = empty_sieve(c, a);
  for (int m : members) {
    if (m < 0 || m >= c.num_morphisms() || c.cod(m) != a)
      throw InputError("sieve member is not a morphism into the base object");
    s.members[m] = true;
  }
  if (!is_precomposition_closed(c, s))
    throw InputError("sieve is not closed under precomposition");
  return s;
}

Sieve restrict_sieve(const FinCategory& c, const Sieve& p, int phi) {
  if (c.cod(phi) != p.base)
    throw InputError("restrict_sieve: codomain mismatch");
  Sieve r = empty_sieve(c, c.dom(phi));
  for (int psi = 0; psi < c.num_morphisms(); ++psi)
    if (c.cod(psi) == c.dom(phi) && p.members[c.compose(phi, psi)])
      r.members[psi] = true;
  return r;
}

OmegaPtr build_omega(CatPtr cat) {
  const FinCategory& c = *cat;
  auto omega = std::make_shared<OmegaPresheaf>();
  omega->cat = cat;
  omega->sieves.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    std::vector<int> arrows = c.hom_into(a);
    if (arrows.size() > 20)
      throw InputError("build_omega: too many morphisms into one object");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << arrows.size());
         ++mask) {
      Sieve s = empty_sieve(c, a);
      for (std::size_t i = 0; i < arrows.size(); ++i)
        if ((mask >> i) & 1) s.members[arrows[i]] = true;
      if (is_precomposition_closed(c, s)) omega->sieves[a].push_back(s);
    }
    std::sort(omega->sieves[a].begin(), omega->sieves[a].end());
  }
  std::vector<int> card(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    card[a] = static_cast<int>(omega->sieves[a].size());
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int m = 0; m < c.num_morphisms(); ++m) {
    int from = c.cod(m), to = c.dom(m);
    action[m].resize(card[from]);
    for (int i = 0; i < card[from]; ++i) {
      Sieve r = restrict_sieve(c, omega->sieves[from][i], m);
      action[m][i] = omega->index_of(to, r);
    }
  }
  omega->psh = make_presheaf(cat, std::move(card), std::move(action));
  return omega;
}

int OmegaPresheaf::index_of(int a, const Sieve& s) const {
  const auto& v = sieves[a];
  auto it = std::lower_bound(v.begin(), v.end(), s);
  if (it == v.end() || !(*it == s))
    throw InputError("sieve not found in Ω carrier");
  return static_cast<int>(it - v.begin());
}

int OmegaPresheaf::maximal_index(int a) const {
  return index_of(a, maximal_sieve(*cat, a));
}

bool Coverage::covers(int a, const Sieve& s) const {
  return sel[a][omega->index_of(a, s)];
}

Subpresheaf Coverage::as_subpresheaf() const {
  Subpresheaf s;
  s.parent = omega->psh;
  s.sel = sel;
  return s;
}

std::vector<Sieve> Coverage::sieves_at(int a) const {
  std::vector<Sieve> out;
  for (std::size_t i = 0; i < sel[a].size(); ++i)
    if (sel[a][i]) out.push_back(omega->sieves[a][i]);
  return out;
}

Coverage coverage_from_sieves(OmegaPtr omega,
                              const std::vector<std::vector<Sieve>>& js) {
  Coverage j;
  j.omega = omega;
  j.sel.resize(omega->sieves.size());
  for (std::size_t a = 0; a < omega->sieves.size(); ++a)
    j.sel[a].assign(omega->sieves[a].size(), false);
  for (std::size_t a = 0; a < js.size(); ++a)
    for (const Sieve& s : js[a])
      j.sel[a][omega->index_of(static_cast<int>(a), s)] = true;
  return j;
}

Coverage trivial_coverage(OmegaPtr omega) {
  const FinCategory& c = *omega->cat;
  std::vector<std::vector<Sieve>> js(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    js[a].push_back(maximal_sieve(c, a));
  return coverage_from_sieves(std::move(omega), js);
}

Coverage all_sieves_coverage(OmegaPtr omega) {
  Coverage j;
  j.omega = omega;
  j.sel.resize(omega->sieves.size());
  for (std::size_t a = 0; a < omega->sieves.size(); ++a)
    j.sel[a].assign(omega->sieves[a].size(), true);
  return j;
}

Coverage double_negation_coverage(OmegaPtr omega) {
  const FinCategory& c = *omega->cat;
  CatPtr cat = omega->cat;
  Coverage j;
  j.omega = omega;
  j.sel.resize(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a) {
    // A sieve on a is a subobject of 𝐲(a); ¬¬S is computed there.
    PshPtr ya = yoneda(cat, a);
    j.sel[a].assign(omega->sieves[a].size(), false);
    for (std::size_t i = 0; i < omega->sieves[a].size(); ++i) {
      const Sieve& s = omega->sieves[a][i];
      Subpresheaf sub = empty_sub(ya);
      for (int m = 0; m < c.num_morphisms(); ++m)
        if (s.members[m]) sub.sel[c.dom(m)][yoneda_index(c, a, m)] = true;
      Subpresheaf nn = sub_not(sub_not(sub));
      j.sel[a][i] = nn == full_sub(ya);
    }
  }
  return j;
}

namespace {

// Condition (L): S ∈ J(a) and φ: b→a implies S·φ ∈ J(b).
void check_local_character(const Coverage& j,
                           std::vector<std::string>& out,
                           const char* label) {
  const FinCategory& c = *j.omega->cat;
  for (int a = 0; a < c.num_objects(); ++a)
    for (std::size_t i = 0; i < j.sel[a].size(); ++i) {
      if (!j.sel[a][i]) continue;
      for (int m = 0; m < c.num_morphisms(); ++m) {
        if (c.cod(m) != a) continue;
        Sieve r = restrict_sieve(c, j.omega->sieves[a][i], m);
        if (!j.covers(c.dom(m), r))
          out.push_back(std::string(label) + ": restriction of sieve " +
                        std::to_string(i) + " on " + c.object_names[a] +
                        " along " + c.morphisms[m].name + " is not covering");
      }
    }
}

}  // namespace

CoverageReport check_lt_coverage(const Coverage& j) {
  const FinCategory& c = *j.omega->cat;
  CoverageReport rep;
  check_local_character(j, rep.violations, "(L)");
  for (int a = 0; a < c.num_objects(); ++a)
    if (!j.covers(a, maximal_sieve(c, a)))
      rep.violations.push_back("(C1): maximal sieve on " + c.object_names[a] +
                               " is not covering");
  // (C2): if p covers and q·φ covers for every φ ∈ p, then q covers.
  for (int a = 0; a < c.num_objects(); ++a)
    for (const Sieve& p : j.omega->sieves[a]) {
      if (!j.covers(a, p)) continue;
      for (const Sieve& q : j.omega->sieves[a]) {
        if (j.covers(a, q)) continue;
        bool locally = true;
        for (int m = 0; m < c.num_morphisms() && locally; ++m)
          if (p.members[m] &&
              !j.covers(c.dom(m), restrict_sieve(c, q, m)))
            locally = false;
        if (locally)
          rep.violations.push_back(
              "(C2): sieve " + std::to_string(j.omega->index_of(a, q)) +
              " on " + c.object_names[a] + " covers locally over sieve " +
              std::to_string(j.omega->index_of(a, p)) +
              " but is not covering");
      }
    }
  return rep;
}

CoverageReport grothendieck_check(const Coverage& j) {
  const FinCategory& c = *j.omega->cat;
  CoverageReport rep;
  for (int a = 0; a < c.num_objects(); ++a)
    if (!j.covers(a, maximal_sieve(c, a)))
      rep.violations.push_back("(M): maximal sieve on " + c.object_names[a] +
                               " is not covering");
  check_local_character(j, rep.violations, "(L)");
  for (int a = 0; a < c.num_objects(); ++a)
    for (const Sieve& s : j.omega->sieves[a]) {
      if (!j.covers(a, s)) continue;
      for (const Sieve& t : j.omega->sieves[a]) {
        if (j.covers(a, t)) continue;
        bool locally = true;
        for (int m = 0; m < c.num_morphisms() && locally; ++m)
          if (s.members[m] && !j.covers(c.dom(m), restrict_sieve(c, t, m)))
            locally = false;
        if (locally)
          rep.violations.push_back(
              "(T): sieve " + std::to_string(j.omega->index_of(a, t)) +
              " on " + c.object_names[a] +
              " covers locally over a covering sieve but is not covering");
      }
    }
  return rep;
}

std::vector<Coverage> enumerate_coverages(OmegaPtr omega, std::size_t cap) {
  const FinCategory& c = *omega->cat;
  int total = 0;
  for (const auto& v : omega->sieves) total += static_cast<int>(v.size());
  if (total > 60 || (std::uint64_t{1} << total) > cap)
    throw InputError("enumerate_coverages: |Sub(Ω)| cap exceeded");
  std::vector<int> offset(c.num_objects(), 0);
  for (int a = 1; a < c.num_objects(); ++a)
    offset[a] = offset[a - 1] + static_cast<int>(omega->sieves[a - 1].size());
  std::vector<Coverage> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    Coverage j;
    j.omega = omega;
    j.sel.resize(c.num_objects());
    for (int a = 0; a < c.num_objects(); ++a) {
      j.sel[a].resize(omega->sieves[a].size());
      for (std::size_t i = 0; i < omega->sieves[a].size(); ++i)
        j.sel[a][i] = (mask >> (offset[a] + i)) & 1;
    }
    if (check_lt_coverage(j).valid()) out.push_back(std::move(j));
  }
  return out;
}

}  // namespace finsite
