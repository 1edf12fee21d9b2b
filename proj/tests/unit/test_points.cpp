#include <random>
#include <stdexcept>

#include "abcat/points.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace abcat;

namespace {

GMor m(std::size_t dom, std::size_t cod, std::initializer_list<std::initializer_list<int>> rows) {
  return GMor(GObj{dom}, GObj{cod}, BitMatrix::from_rows(rows));
}

const GMor kSum = m(2, 1, {{1, 1}});

// |{(g, w1, w2) : f1 g = e1 w1, f2 g = e2 w2}| for two triples over the base.
std::size_t iterated_pullback_size(const Triple& a, const Triple& b, std::size_t base_dim) {
  const auto fa = oracle::from(a.f.mat()), ea = oracle::from(a.cover.epsilon().mat());
  const auto fb = oracle::from(b.f.mat()), eb = oracle::from(b.cover.epsilon().mat());
  std::size_t count = 0;
  for (oracle::Vec g = 0; g < (1u << base_dim); ++g)
    for (oracle::Vec w1 = 0; w1 < (1u << a.cover.source().n); ++w1)
      for (oracle::Vec w2 = 0; w2 < (1u << b.cover.source().n); ++w2)
        if (oracle::apply(fa, g) == oracle::apply(ea, w1) && oracle::apply(fb, g) == oracle::apply(eb, w2)) ++count;
  return count;
}

// Every composable pair of stored arrows composes to the stored composite.
bool functorial(const PointHandle& p) {
  for (const auto& x : p.nodes())
    for (const auto& [y, xy] : x.arrows)
      for (const auto& [z, yz] : p.node(y).arrows) {
        if (!p.has_arrow(x.id, z)) return false;
        if (p.arrow(x.id, z) != yz * xy) return false;
      }
  return true;
}

bool arrows_epi(const PointHandle& p) {
  for (const auto& x : p.nodes())
    for (const auto& [y, a] : x.arrows)
      if (rank(a) != p.node(y).obj.n) return false;
  return true;
}

}  // namespace

TEST_CASE("base points") {
  for (std::size_t n : {0, 1, 3}) {
    const PointHandle p = base_point(GObj{n});
    CHECK(p.size() == 1);
    CHECK(p.node(p.base()).obj.n == n);
    CHECK(p.node(p.base()).kind == NodeKind::Base);
    CHECK(p.node(p.base()).depth == 0);
  }
}

TEST_CASE("refine_for builds the pullback") {
  PointHandle p = base_point(GObj{1});
  const Triple e{p.base(), GMor::identity(GObj{1}), Cover(kSum)};
  const NodeId r = p.refine_for(e);
  // Z2 x_Z2 Z2^2 along id and [1,1] has 4 elements, so dimension 2.
  CHECK((std::size_t{1} << p.node(r).obj.n) == oracle::fiber_product_size(e.f, kSum));
  CHECK(p.node(r).obj.n == 2);
  CHECK(p.node(r).kind == NodeKind::Refined);
  CHECK(p.node(r).depth == 1);
  CHECK(p.refine_for(e) == r);
  CHECK(p.size() == 2);
  CHECK(compose(kSum, p.block_projection(r, *p.find_triple(e))) == compose(e.f, p.arrow_mor(r, p.base())));

  const NodeId same = p.refine_for(Triple{p.base(), GMor::identity(GObj{1}), Cover(GMor::identity(GObj{1}))});
  CHECK(p.node(same).obj.n == 1);
  CHECK(p.arrow(same, p.base()).is_identity());
}

TEST_CASE("refining a zero map adds the kernel of the cover") {
  for (const auto& cover : enumerate_covers(2)) {
    PointHandle p = base_point(GObj{2});
    const Triple e{p.base(), GMor::zero(GObj{2}, cover.target()), cover};
    const NodeId r = p.refine_for(e);
    CHECK((std::size_t{1} << p.node(r).obj.n) == oracle::fiber_product_size(e.f, cover.epsilon()));
    CHECK(p.node(r).obj.n == 2 + cover.source().n - cover.target().n);
  }
}

TEST_CASE("refine_for rejects bad triples") {
  PointHandle p = base_point(GObj{1});
  CHECK_THROWS_AS(p.refine_for(Triple{7, GMor::identity(GObj{1}), Cover(kSum)}), std::invalid_argument);
  CHECK_THROWS_AS(p.refine_for(Triple{0, GMor::identity(GObj{2}), Cover(m(2, 2, {{1, 0}, {0, 1}}))}),
                  std::invalid_argument);
  CHECK_THROWS_AS(p.refine_for(Triple{0, GMor::identity(GObj{1}), Cover(GMor::identity(GObj{2}))}),
                  std::invalid_argument);
}

TEST_CASE("upper bounds") {
  PointHandle p = base_point(GObj{1});
  const Triple a{p.base(), GMor::identity(GObj{1}), Cover(kSum)};
  const Triple b{p.base(), m(1, 2, {{1}, {0}}), Cover(m(2, 2, {{1, 1}, {0, 1}}))};
  const NodeId ra = p.refine_for(a);
  const NodeId rb = p.refine_for(b);
  CHECK(p.upper_bound(ra, ra) == ra);
  CHECK(p.upper_bound(p.base(), ra) == ra);
  const NodeId j = p.upper_bound(ra, rb);
  CHECK(p.node(j).kind == NodeKind::UpperBound);
  CHECK(p.has_arrow(j, ra));
  CHECK(p.has_arrow(j, rb));
  CHECK((std::size_t{1} << p.node(j).obj.n) == iterated_pullback_size(a, b, 1));
  CHECK(p.upper_bound(rb, ra) == j);
  CHECK(functorial(p));
  CHECK(arrows_epi(p));
}

TEST_CASE("directedness and functoriality survive random growth") {
  std::mt19937 rng(20261015);
  const auto covers = enumerate_covers(2);
  for (int run = 0; run < 20; ++run) {
    PointHandle p = base_point(GObj{1 + run % 2});
    for (int step = 0; step < 5; ++step) {
      const NodeId a = rng() % p.size();
      if (rng() % 3 == 0) {
        p.upper_bound(a, static_cast<NodeId>(rng() % p.size()));
      } else {
        const Cover& c = covers[rng() % covers.size()];
        const auto fs = enumerate_morphisms(p.node(a).obj, c.target());
        p.refine_for(Triple{a, fs[rng() % fs.size()], c});
      }
    }
    for (const auto& x : p.nodes())
      for (const auto& y : p.nodes()) {
        const NodeId j = p.upper_bound(x.id, y.id);
        CHECK(p.has_arrow(j, x.id));
        CHECK(p.has_arrow(j, y.id));
      }
    CHECK(functorial(p));
    CHECK(arrows_epi(p));
  }
}

TEST_CASE("fingerprints are reproducible") {
  auto build = [] {
    PointHandle p = base_point(GObj{1});
    const NodeId r = p.refine_for(Triple{p.base(), GMor::identity(GObj{1}), Cover(kSum)});
    p.refine_for(Triple{r, m(2, 1, {{0, 1}}), Cover(kSum)});
    return p;
  };
  const PointHandle a = build();
  const PointHandle b = build();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.node(i).fingerprint == b.node(i).fingerprint);
  CHECK(a.node(1).fingerprint != a.node(2).fingerprint);
}

TEST_CASE("u_eval") {
  PointHandle p = base_point(GObj{1});
  CHECK(u_eval(p, GObj{1}, 0).size() == 2);
  CHECK(u_eval(p, GObj{0}, 0).size() == 1);
  p.refine_for(Triple{p.base(), GMor::identity(GObj{1}), Cover(kSum)});
  // The refined node has value Z2^2: its 4 maps to Z2 include the 2 pulled
  // back from the base, so the materialized colimit has 2 + 2 classes.
  const auto classes = u_eval(p, GObj{1}, 1);
  CHECK(classes.size() == 4);
  CHECK(classes[0].node == p.base());
  CHECK(classes[0].members == 2);
  CHECK(u_eval(p, GObj{1}, 0).size() == 2);
}

TEST_CASE("goodness is produced by refinement") {
  PointHandle p = base_point(GObj{1});
  const Triple e{p.base(), GMor::identity(GObj{1}), Cover(kSum)};
  CHECK_FALSE(is_good(p, e, WitnessPolicy::Resolved));
  // Every epi of G splits, so a lift already exists at the base itself.
  CHECK(is_good(p, e, WitnessPolicy::Any, 0));
  p.refine_for(e);
  const auto w = goodness_witness(p, e, WitnessPolicy::Resolved, 1);
  REQUIRE(w.has_value());
  CHECK(compose(kSum, w->lift) == compose(e.f, p.arrow_mor(w->node, e.node)));
  CHECK_FALSE(is_good(p, e, WitnessPolicy::Resolved, 0));
}

TEST_CASE("stalk elements and comparison") {
  PointHandle p = base_point(GObj{1});
  const SheafAb F = yoneda(GObj{2});
  CHECK_THROWS_AS(stalk_elem(p, F, BitVector{1}), std::invalid_argument);
  std::vector<StalkElement> germs;
  for (const auto& g : enumerate_morphisms(GObj{1}, GObj{2})) germs.push_back(stalk_elem(p, F, yoneda_section(g)));
  REQUIRE(germs.size() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const auto c = stalk_eq(p, F, germs[i], germs[j], 0);
      CHECK(c.equal() == (i == j));
      if (i != j) CHECK(c.conclusive);
    }
  const auto same = stalk_eq(p, F, germs[1], germs[1], 3);
  CHECK(same.equal());
  CHECK(same.witness_x.is_identity());

  // A germ and its transport to a refinement are the same germ.
  const NodeId r = p.refine_for(Triple{p.base(), GMor::identity(GObj{1}), Cover(kSum)});
  const StalkElement moved{r, transport(p, F, germs[3], r)};
  CHECK(moved.section.size() == eval_obj(F.underlying, p.node(r).obj));
  CHECK(stalk_eq(p, F, germs[3], moved, 1).equal());
  CHECK_FALSE(stalk_eq(p, F, germs[2], moved, 1).equal());
  CHECK_FALSE(stalk_eq(p, F, germs[2], moved, 1).conclusive);
  CHECK_FALSE(stalk_eq(p, F, germs[3], moved, 0).equal());
}

TEST_CASE("point axioms for the base point of Z2") {
  PointHandle p = base_point(GObj{1});
  const Report r = check_point_axioms(p, 2, 2);
  CHECK(r.passed());
  for (const char* name : {"cover-surjectivity", "pullback-bijection", "finite-limits"}) {
    REQUIRE(r.find(name) != nullptr);
    CHECK(r.find(name)->checked > 0);
  }
  PointHandle q = base_point(GObj{1});
  const Report vacuous = check_point_axioms(q, 0, 2);
  CHECK(vacuous.passed());
  CHECK(vacuous.checked() == 0);
}

TEST_CASE("cover surjectivity needs the refinement") {
  PointHandle p = base_point(GObj{1});
  const PointAxiomOptions no_resolution{false};
  const Triple e{p.base(), GMor::identity(GObj{1}), Cover(kSum)};
  auto mentions = [&](const Report& r) {
    for (const auto& f : r.find("cover-surjectivity")->failures)
      if (f["node"] == 0 && f["cover"]["mat"]["entries"] == json::array({json::array({1, 1})}) &&
          f["class"]["mat"]["entries"] == json::array({json::array({1})}))
        return true;
    return false;
  };
  const Report before = check_point_axioms(p, 2, 0, no_resolution);
  CHECK_FALSE(before.passed());
  CHECK(mentions(before));
  p.refine_for(e);
  const Report after = check_point_axioms(p, 2, 0, no_resolution);
  CHECK_FALSE(mentions(after));
  CHECK(after.failure_count() + 1 == before.failure_count());

  // Resolving every class of the base layer clears the section.
  for (std::size_t w = 0; w <= 2; ++w)
    for (const auto& c : u_eval(p, GObj{w}, 0))
      for (const auto& cover : enumerate_covers(2))
        if (cover.target().n == w) p.refine_for(Triple{c.node, c.map, cover});
  CHECK(check_point_axioms(p, 2, 0, no_resolution).passed());
}

TEST_CASE("truncated stalks of a short exact sequence are exact at the base") {
  for (const auto& ses : short_exact_sequences(2)) {
    const NatTrans i = yoneda_map(ses.mono);
    const NatTrans q = yoneda_map(ses.epi);
    for (std::size_t u = 0; u <= 2; ++u) {
      // At the base node the stalk is F(U), and the germ maps are the components.
      const BitMatrix iu = i.component(u);
      const BitMatrix qu = q.component(u);
      CHECK(rank(iu) == iu.cols());
      CHECK((qu * iu).is_zero());
      CHECK(rank(iu) == qu.cols() - rank(qu));
      CHECK(rank(qu) == qu.rows());
    }
  }
}

TEST_CASE("conservativity verdicts") {
  const Report epi = conservativity_check(yoneda_map(kSum), {GObj{1}}, 2, 0);
  CHECK_FALSE(epi.passed());
  CHECK(epi.details["verdict"] == "NOT-ISO");
  CHECK(epi.details["germs"][0]["source_germs"] == 4);
  CHECK(epi.details["germs"][0]["target_germs"] == 2);
  CHECK(epi.details["germs"][0]["image_germs"] == 2);

  for (const GMor& iso : {GMor::identity(GObj{1}), m(2, 2, {{0, 1}, {1, 0}})}) {
    const Report r = conservativity_check(yoneda_map(iso), {}, 2, 1);
    CHECK(r.passed());
    CHECK(r.details["verdict"] == "STALKWISE-ISO");
    CHECK(r.details["sectionwise_iso"] == true);
  }
  const NatTrans covariant(AddFunctor::covariant(1), AddFunctor::covariant(1), BitMatrix::identity(1));
  CHECK_THROWS_AS(conservativity_check(covariant, {}, 2, 0), std::invalid_argument);
}
