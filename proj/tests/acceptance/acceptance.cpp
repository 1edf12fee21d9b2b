// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abcat/addfun.hpp"
#include "abcat/json_io.hpp"
#include "abcat/matcat.hpp"
#include "abcat/points.hpp"
#include "abcat/regsite.hpp"
#include "oracles.hpp"

#ifndef ABCAT_CLI_PATH
#error "ABCAT_CLI_PATH must name the abcat executable"
#endif

using namespace abcat;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note = what;
    ok = ok && cond;
  }
};

GMor m(std::size_t dom, std::size_t cod, std::initializer_list<std::initializer_list<int>> rows) {
  return GMor(GObj{dom}, GObj{cod}, BitMatrix::from_rows(rows));
}

Outcome criterion_abelian() {
  Outcome o;
  const Report r = verify_abelian(2);
  o.expect(r.passed(), "verify_abelian(2) reported failures");
  o.expect(r.details["morphisms_checked"] == 30, "expected all 30 morphisms between objects <= 2");
  for (const char* s : {"mono-is-kernel-of-cokernel", "epi-is-cokernel-of-kernel", "biproduct-identities"})
    o.expect(r.find(s) && r.find(s)->checked > 0, std::string("section not exercised: ") + s);
  o.note = o.ok ? std::to_string(r.checked()) + " checks" : o.note;
  return o;
}

Outcome criterion_kernel_oracle() {
  Outcome o;
  std::vector<std::vector<oracle::Subgroup>> groups;
  for (std::size_t n = 0; n <= 3; ++n) groups.push_back(oracle::subgroups(n));
  std::size_t matrices = 0, mismatches = 0;
  for (std::size_t rows = 0; rows <= 3; ++rows)
    for (std::size_t cols = 0; cols <= 3; ++cols)
      for (const auto& mat : oracle::all_matrices(rows, cols)) {
        ++matrices;
        const GMor f(GObj{cols}, GObj{rows}, mat);
        const auto om = oracle::from(mat);
        const auto k = kernel(f);
        const auto q = cokernel(f);
        const auto ker = oracle::kernel_by_subgroups(om, groups[cols]);
        const auto im = oracle::image_by_subgroups(om, groups[rows]);
        const bool ok = oracle::column_space(oracle::from(k.mor.mat())) == ker &&
                        oracle::null_space(oracle::from(k.mor.mat())).size() == 1 &&
                        oracle::null_space(oracle::from(q.mor.mat())) == im &&
                        oracle::column_space(oracle::from(q.mor.mat())).size() == (std::size_t{1} << q.object.n) &&
                        rank(mat) + k.object.n == cols;  // rank-nullity
        if (!ok) ++mismatches;
      }
  o.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  if (o.ok) o.note = std::to_string(matrices) + " matrices, 0 mismatches";
  return o;
}

Outcome criterion_subfunctors() {
  Outcome o;
  for (auto [k, expected] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 5}}) {
    const auto subs = subfunctors(AddFunctor::contravariant(k));
    o.expect(subs.size() == expected, "k=" + std::to_string(k) + " gave " + std::to_string(subs.size()));
    o.expect(subs.size() == oracle::subgroups(k).size(), "count differs from subgroup enumeration");
    std::set<oracle::Subgroup> images;
    for (const auto& s : subs) images.insert(oracle::column_space(oracle::from(s.component_at_z2)));
    for (const auto& g : oracle::subgroups(k)) o.expect(images.count(g) == 1, "subgroup without subfunctor");
  }
  if (o.ok) o.note = "k=1 -> 2, k=2 -> 5";
  return o;
}

Outcome criterion_sheaves() {
  Outcome o;
  for (std::size_t a = 0; a <= 2; ++a)
    o.expect(check_sheaf(yoneda(GObj{a}), 2).passed(), "yoneda(" + std::to_string(a) + ") fails descent");
  for (std::size_t a = 0; a <= 4; ++a)
    for (std::size_t b = 0; b <= 4; ++b) {
      if (a * b > 4) continue;
      const auto nats = nat_transformations(AddFunctor::contravariant(a), AddFunctor::contravariant(b));
      o.expect(nats.size() == (std::size_t{1} << (a * b)), "|Nat(H_a,H_b)| wrong");
      o.expect(check_full_faithful(GObj{a}, GObj{b}).passed(), "Hom -> Nat not bijective");
    }
  std::size_t sequences = 0;
  for (const auto& ses : short_exact_sequences(2)) {
    ++sequences;
    o.expect(verify_embedding_exact(ses, 2).passed(), "embedding not exact on " + to_json(ses).dump());
  }
  if (o.ok) o.note = std::to_string(sequences) + " short exact sequences";
  return o;
}

Outcome criterion_point_axioms() {
  Outcome o;
  PointHandle p = base_point(GObj{1});
  const Report r = check_point_axioms(p, 2, 2);
  for (const auto& s : r.sections)
    o.expect(s.passed() && s.checked > 0, s.axiom + ": " + std::to_string(s.failures.size()) + " failures");
  o.expect(r.sections.size() == 3, "expected three sections");
  if (o.ok) o.note = std::to_string(r.checked()) + " checks, " + std::to_string(p.size()) + " nodes";
  return o;
}

// Store with nodes up to stage 3: refine every node along one fixed family of
// triples, stage by stage, then add an upper bound per stage.
PointHandle deep_store(GObj u) {
  PointHandle p = base_point(u);
  const auto covers = enumerate_covers(2);
  std::vector<NodeId> frontier{p.base()};
  for (std::size_t stage = 0; stage < 3; ++stage) {
    std::vector<NodeId> next;
    for (NodeId n : frontier) {
      const GObj value = p.node(n).obj;
      for (std::size_t i = 0; i < covers.size(); i += 3) {
        const auto fs = enumerate_morphisms(value, covers[i].target());
        next.push_back(p.refine_for(Triple{n, fs[(i + stage) % fs.size()], covers[i]}));
      }
    }
    if (next.size() > 1) next.push_back(p.upper_bound(next.front(), next.back()));
    frontier.assign(next.begin(), next.begin() + std::min<std::size_t>(next.size(), 3));
  }
  return p;
}

Outcome criterion_injectivity() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a <= 2; ++a)
    for (std::size_t u = 0; u <= 2; ++u) {
      const SheafAb F = yoneda(GObj{a});
      PointHandle p = deep_store(GObj{u});
      o.expect(p.node(p.size() - 1).depth == 3, "store does not reach stage 3");
      std::vector<StalkElement> germs;
      for (const auto& g : enumerate_morphisms(GObj{u}, GObj{a})) germs.push_back(stalk_elem(p, F, yoneda_section(g)));
      for (std::size_t i = 0; i < germs.size(); ++i)
        for (std::size_t j = 0; j < germs.size(); ++j)
          for (std::size_t d = 0; d <= 3; ++d) {
            const auto fast = stalk_eq(p, F, germs[i], germs[j], d);
            const auto slow = stalk_eq_search(p, F, germs[i], germs[j], d);
            o.expect(fast.equal() == slow.equal(), "fast path disagrees with search");
            o.expect(fast.equal() == (i == j), "distinct sections identified");
            if (i != j) ++pairs;
          }
    }
  if (o.ok) o.note = std::to_string(pairs) + " distinct (pair, depth) comparisons";
  return o;
}

Outcome criterion_conservativity() {
  Outcome o;
  const Report epi = conservativity_check(yoneda_map(m(2, 1, {{1, 1}})), {GObj{1}}, 2, 0);
  o.expect(epi.details["verdict"] == "NOT-ISO", "epi [1,1] not reported NOT-ISO");
  o.expect(epi.details["germs"][0]["source_germs"] == 4 && epi.details["germs"][0]["image_germs"] == 2,
           "expected 4 germs mapping onto 2");
  std::size_t isos = 0;
  for (std::size_t n = 0; n <= 2; ++n)
    for (const auto& f : enumerate_morphisms(GObj{n}, GObj{n})) {
      if (!is_iso(f)) continue;
      ++isos;
      const Report r = conservativity_check(yoneda_map(f), {}, 2, 1);
      o.expect(r.details["verdict"] == "STALKWISE-ISO", "iso not STALKWISE-ISO: " + f.to_string());
      o.expect(r.details["sectionwise_iso"] == true, "iso not sectionwise iso: " + f.to_string());
    }
  if (o.ok) o.note = "NOT-ISO 4 -> 2; " + std::to_string(isos) + " isos STALKWISE-ISO";
  return o;
}

Outcome criterion_goodness_persistence() {
  Outcome o;
  std::mt19937 rng(0xAB5EED);
  PointHandle p = base_point(GObj{1});
  const auto covers = enumerate_covers(2);

  std::vector<Triple> pool;
  for (const auto& c : covers)
    for (const auto& f : enumerate_morphisms(GObj{1}, c.target())) pool.push_back(Triple{p.base(), f, c});
  std::shuffle(pool.begin(), pool.end(), rng);

  std::vector<Triple> resolved;
  std::size_t rechecks = 0;
  auto recheck_all = [&] {
    for (const auto& e : resolved) {
      ++rechecks;
      o.expect(is_good(p, e, WitnessPolicy::Resolved), "goodness lost for a resolved triple");
    }
  };
  for (int i = 0; i < 5; ++i) {
    // Alternate between triples on the base and on the most recent node.
    Triple e = pool[i];
    if (i % 2 == 1) {
      const NodeId n = p.size() - 1;
      const auto fs = enumerate_morphisms(p.node(n).obj, e.cover.target());
      e = Triple{n, fs[rng() % fs.size()], e.cover};
    }
    p.refine_for(e);
    resolved.push_back(e);
    recheck_all();
    p.upper_bound(static_cast<NodeId>(rng() % p.size()), static_cast<NodeId>(rng() % p.size()));
    recheck_all();
  }
  if (o.ok) o.note = std::to_string(rechecks) + " re-checks over " + std::to_string(p.size()) + " nodes";
  return o;
}

std::string run_and_capture(const std::string& command, int& status) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

Outcome criterion_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "abcat_acceptance";
  std::filesystem::create_directories(dir);
  const auto epi = dir / "epi.json";
  const auto swap = dir / "swap.json";
  std::ofstream(epi) << R"({"dom":2,"cod":1,"mat":{"rows":1,"cols":2,"entries":[[1,1]]}})";
  std::ofstream(swap) << R"({"dom":2,"cod":2,"mat":{"rows":2,"cols":2,"entries":[[0,1],[1,0]]}})";

  const std::string cli = ABCAT_CLI_PATH;
  const std::vector<std::pair<std::string, int>> suite{
      {"verify-abelian --bound 2", 0},
      {"subfunctors --k 2", 0},
      {"check-sheaf --functor '{\"k\":1,\"variance\":\"contra\"}' --bound 2", 0},
      {"check-embedding --bound 2", 0},
      {"point-axioms --object 1 --bound 2 --depth 2", 0},
      {"conservativity --phi " + epi.string(), 1},
      {"conservativity --phi " + swap.string(), 0},
  };
  std::size_t bytes = 0;
  for (const auto& [args, expected] : suite) {
    int s1 = 0, s2 = 0;
    const std::string first = run_and_capture(cli + " " + args + " --format json", s1);
    const std::string second = run_and_capture(cli + " " + args + " --format json", s2);
    o.expect(s1 == expected && s2 == expected, "unexpected exit code for: " + args);
    o.expect(!first.empty() && first == second, "reports differ for: " + args);
    bytes += first.size();
  }
  if (o.ok) o.note = std::to_string(suite.size()) + " commands, " + std::to_string(bytes) + " bytes identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no budget
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "abelian axioms exhaustive at bound 2", 5, criterion_abelian},
      {2, "kernel/cokernel vs subgroup oracle up to 3x3", 10, criterion_kernel_oracle},
      {3, "subfunctor counts", 1, criterion_subfunctors},
      {4, "sheaf and embedding suite", 30, criterion_sheaves},
      {5, "point axioms for base_point(Z2), bound 2, depth 2", 30, criterion_point_axioms},
      {6, "base injectivity of stalks, depth <= 3", 30, criterion_injectivity},
      {7, "conservativity harness", 10, criterion_conservativity},
      {8, "goodness persistence under seeded refinement", 5, criterion_goodness_persistence},
      {9, "CLI determinism", 0, criterion_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.budget_s > 0 && secs > c.budget_s) {
      o.ok = false;
      o.note = "over the " + std::to_string(c.budget_s) + " s budget";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << timing << ") - "
              << o.note << "\n";
    if (!o.ok) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
