#include "abcat/regsite.hpp"

#include <set>
#include <stdexcept>

#include "abcat/json_io.hpp"

namespace abcat {

Cover::Cover(GMor epsilon) : epsilon_(std::move(epsilon)) {
  if (!is_epi(epsilon_)) throw std::invalid_argument("Cover: " + epsilon_.to_string() + " is not epi");
}

std::optional<Cover> Cover::make(const GMor& epsilon) {
  if (!is_epi(epsilon)) return std::nullopt;
  return Cover(epsilon);
}

bool is_cover(const GMor& f) { return is_epi(f); }

std::vector<Cover> enumerate_covers(std::size_t bound) {
  std::vector<Cover> out;
  for (std::size_t w = 0; w <= bound; ++w) {
    for (std::size_t wp = 0; wp <= bound; ++wp) {
      if (w == 0 && wp == 0) continue;
      for (const auto& f : enumerate_morphisms(GObj{wp}, GObj{w}))
        if (is_epi(f)) out.emplace_back(f);
    }
  }
  return out;
}

Presheaf::Presheaf(AddFunctor underlying) : functor_(underlying) {
  if (functor_.variance != Variance::Contravariant) {
    throw std::invalid_argument("Presheaf: underlying functor must be contravariant");
  }
}

BitMatrix Presheaf::restrict_along(const GMor& f) const {
  if (auto it = overrides_.find(f); it != overrides_.end()) return it->second;
  return eval_mor(functor_, f);
}

Presheaf Presheaf::with_restriction(const GMor& f, BitMatrix m) const {
  if (m.rows() != dim(f.dom()) || m.cols() != dim(f.cod())) {
    throw std::invalid_argument("Presheaf::with_restriction: shape mismatch");
  }
  Presheaf copy = *this;
  copy.overrides_[f] = std::move(m);
  return copy;
}

SheafAb yoneda(GObj a) { return SheafAb{AddFunctor::contravariant(a.n), 0}; }

BitVector yoneda_section(const GMor& g) {
  BitVector v;
  v.reserve(g.cod().n * g.dom().n);
  for (std::size_t c = 0; c < g.dom().n; ++c)
    for (std::size_t r = 0; r < g.cod().n; ++r) v.push_back(g.mat().at(r, c) ? 1 : 0);
  return v;
}

GMor yoneda_unsection(GObj a, GObj w, const BitVector& v) {
  if (v.size() != a.n * w.n) throw std::invalid_argument("yoneda_unsection: length mismatch");
  BitMatrix m(a.n, w.n);
  for (std::size_t c = 0; c < w.n; ++c)
    for (std::size_t r = 0; r < a.n; ++r) m.set(r, c, v[c * a.n + r] & 1);
  return {w, a, std::move(m)};
}

Report check_sheaf(const Presheaf& F, std::size_t bound) {
  Report report;
  report.name = "check-sheaf";
  auto& descent = report.section("descent");

  for (const auto& cover : enumerate_covers(bound)) {
    const GMor& eps = cover.epsilon();
    const Pullback kp = pullback(eps, eps);
    const BitMatrix r = F.restrict_along(eps);
    const BitMatrix diff = F.restrict_along(kp.p1) + F.restrict_along(kp.p2);

    ++descent.checked;
    const std::size_t fw = F.dim(eps.cod());
    const bool injective = rank(r) == fw;
    const bool lands_in_equalizer = (diff * r).is_zero();
    // Equalizer dimension = dim ker(diff); the image of r must fill it.
    const bool fills_equalizer = F.dim(eps.dom()) - rank(diff) == rank(r);
    if (!(injective && lands_in_equalizer && fills_equalizer)) {
      json failure = {{"cover", to_json(eps)}};
      if (!injective) failure["reason"] = "restriction not injective";
      else if (!lands_in_equalizer) failure["reason"] = "restriction does not equalize the pullback projections";
      else failure["reason"] = "restriction does not reach the whole equalizer";
      descent.fail(std::move(failure));
    }
  }

  report.details["bound"] = bound;
  report.details["functor"] = to_json(F.underlying());
  return report;
}

SheafAb certify_sheaf(const AddFunctor& F, std::size_t bound) {
  Report r = check_sheaf(Presheaf(F), bound);
  if (!r.passed()) throw std::invalid_argument("certify_sheaf: descent fails at bound " + std::to_string(bound));
  return SheafAb{F, bound};
}

NatTrans yoneda_map(const GMor& h) {
  return {AddFunctor::contravariant(h.dom().n), AddFunctor::contravariant(h.cod().n), h.mat()};
}

Report check_full_faithful(GObj a, GObj b) {
  if (a.n * b.n > 9) {
    throw EnumerationLimitError("check_full_faithful: a.n * b.n = " + std::to_string(a.n * b.n) + " exceeds 9");
  }
  Report report;
  report.name = "check-full-faithful";
  auto& naturality = report.section("postcomposition-natural");
  auto& bijection = report.section("hom-to-nat-bijection");

  const auto homs = enumerate_morphisms(a, b);
  const auto nats = nat_transformations(AddFunctor::contravariant(a.n), AddFunctor::contravariant(b.n));
  std::set<BitMatrix> image;

  for (const auto& h : homs) {
    const NatTrans eta = yoneda_map(h);
    image.insert(eta.component_at_z2);

    // Component at W acts on sections as postcomposition with h; naturality
    // is checked against every restriction between objects of dimension <= 2.
    ++naturality.checked;
    bool ok = true;
    for (std::size_t w = 0; w <= 2 && ok; ++w) {
      for (const auto& g : enumerate_morphisms(GObj{w}, a)) {
        if (eta.component(w) * yoneda_section(g) != yoneda_section(compose(h, g))) {
          ok = false;
          break;
        }
      }
      for (std::size_t v = 0; v <= 2 && ok; ++v)
        for (const auto& f : enumerate_morphisms(GObj{v}, GObj{w}))
          if (!is_natural_at(eta, f)) ok = false;
    }
    if (!ok) naturality.fail({{"morphism", to_json(h)}});
  }

  ++bijection.checked;
  std::set<BitMatrix> nat_set;
  for (const auto& n : nats) nat_set.insert(n.component_at_z2);
  if (image.size() != homs.size()) bijection.fail({{"reason", "not injective"}});
  if (image != nat_set) bijection.fail({{"reason", "not surjective"}});

  report.details["hom_count"] = homs.size();
  report.details["nat_count"] = nats.size();
  return report;
}

LocalLift local_lift(const GMor& b, const GMor& g) {
  const Pullback pb = pullback(b, g);
  return LocalLift{Cover(pb.p2), pb.p1};
}

std::optional<GMor> direct_lift(const GMor& b, const GMor& g) {
  if (b.cod() != g.cod()) throw std::invalid_argument("direct_lift: codomain mismatch");
  auto h = solve(b.mat(), g.mat());
  if (!h) return std::nullopt;
  return GMor{g.dom(), b.dom(), std::move(*h)};
}

Report check_local_surjectivity(const GMor& b, std::size_t bound) {
  if (!is_epi(b)) throw std::invalid_argument("check_local_surjectivity: " + b.to_string() + " is not epi");
  Report report;
  report.name = "check-local-surjectivity";
  auto& sec = report.section("local-lift");

  for (std::size_t w = 0; w <= bound; ++w) {
    for (const auto& g : enumerate_morphisms(GObj{w}, b.cod())) {
      ++sec.checked;
      const Pullback pb = pullback(b, g);
      if (!is_epi(pb.p2) || compose(b, pb.p1) != compose(g, pb.p2)) {
        sec.fail({{"section", to_json(g)}});
      }
    }
  }
  report.details["epi"] = to_json(b);
  report.details["bound"] = bound;
  return report;
}

void require_short_exact(const ShortExact& ses) {
  const auto& m = ses.mono;
  const auto& e = ses.epi;
  if (m.cod() != e.dom()) throw std::invalid_argument("short exact sequence: mono codomain != epi domain");
  if (!is_mono(m)) throw std::invalid_argument("short exact sequence: first map is not mono");
  if (!is_epi(e)) throw std::invalid_argument("short exact sequence: second map is not epi");
  if (!compose(e, m).mat().is_zero()) throw std::invalid_argument("short exact sequence: composite is not zero");
  if (m.dom().n + e.cod().n != m.cod().n) {
    throw std::invalid_argument("short exact sequence: image of mono is not the kernel of epi");
  }
}

std::vector<ShortExact> short_exact_sequences(std::size_t bound) {
  std::vector<ShortExact> out;
  for (std::size_t b = 1; b <= bound; ++b)
    for (std::size_t a = 0; a <= b; ++a)
      for (const auto& m : enumerate_morphisms(GObj{a}, GObj{b}))
        if (is_mono(m)) out.push_back({m, cokernel(m).mor});
  return out;
}

Report verify_embedding_exact(const ShortExact& ses, std::size_t bound) {
  require_short_exact(ses);
  Report report;
  report.name = "verify-embedding-exact";
  auto& left = report.section("sectionwise-left-exact");

  const GObj A = ses.mono.dom();
  const GObj B = ses.mono.cod();
  for (std::size_t w = 0; w <= bound; ++w) {
    ++left.checked;
    std::set<BitMatrix> kernel_sections;
    for (const auto& h : enumerate_morphisms(GObj{w}, B))
      if (compose(ses.epi, h).mat().is_zero()) kernel_sections.insert(h.mat());
    std::set<BitMatrix> image_sections;
    std::size_t count = 0;
    for (const auto& a : enumerate_morphisms(GObj{w}, A)) {
      image_sections.insert(compose(ses.mono, a).mat());
      ++count;
    }
    if (image_sections.size() != count || image_sections != kernel_sections) {
      left.fail({{"W", w}, {"kernel_sections", kernel_sections.size()}, {"image_sections", image_sections.size()}});
    }
  }

  Report lifts = check_local_surjectivity(ses.epi, bound);
  report.sections.push_back(lifts.sections.front());
  report.sections.back().axiom = "local-surjectivity";
  report.details["bound"] = bound;
  return report;
}

}  // namespace abcat
