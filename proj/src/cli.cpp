#include "abcat/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "abcat/addfun.hpp"
#include "abcat/json_io.hpp"
#include "abcat/matcat.hpp"
#include "abcat/points.hpp"
#include "abcat/regsite.hpp"
#include "abcat/report.hpp"

namespace abcat {

namespace {

constexpr std::size_t kMaxBound = 4;
constexpr std::size_t kMaxDepth = 4;

struct RunConfig {
  std::size_t bound = 2;
  std::size_t depth = 2;
  std::string format = "json";
  std::string input;
  std::string output;
  // Command-specific.
  std::size_t k = 1;
  std::string variance = "contra";
  std::string functor;
  std::string phi;
  std::vector<std::size_t> objects;
};

void add_common(CLI::App* cmd, RunConfig& cfg, bool with_depth) {
  cmd->add_option("--bound", cfg.bound, "Largest object dimension examined")->capture_default_str();
  if (with_depth) cmd->add_option("--depth", cfg.depth, "Truncation depth of the refinement tower")->capture_default_str();
  cmd->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmd->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
}

json load_json_argument(const std::string& text_or_path) {
  // Inline JSON starts with '{'; anything else names a file.
  const auto first = text_or_path.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text_or_path[first] == '{') return parse_json_text(text_or_path);
  return read_json_file(text_or_path);
}

Report run_verify_abelian(const RunConfig& cfg) {
  if (cfg.input.empty()) return verify_abelian(cfg.bound);
  const GMor f = morphism_from_json(read_json_file(cfg.input));
  Report report;
  report.name = "verify-abelian";
  verify_abelian_at(f, report);
  report.details["morphism"] = to_json(f);
  return report;
}

Report run_subfunctors(const RunConfig& cfg) {
  const AddFunctor F = cfg.variance == "co" ? AddFunctor::covariant(cfg.k) : AddFunctor::contravariant(cfg.k);
  const auto subs = subfunctors(F);
  Report report;
  report.name = "subfunctors";
  auto& count = report.section("count-matches-subspaces");
  ++count.checked;
  if (subs.size() != subspace_count(cfg.k)) {
    count.fail({{"count", subs.size()}, {"expected", subspace_count(cfg.k)}});
  }
  auto& monic = report.section("inclusions-monic");
  json inclusions = json::array();
  for (const auto& s : subs) {
    ++monic.checked;
    if (!s.is_monic()) monic.fail({{"inclusion", to_json(s.component_at_z2)}});
    inclusions.push_back({{"dim", s.source.k}, {"inclusion", to_json(s.component_at_z2)}});
  }
  report.details["functor"] = to_json(F);
  report.details["count"] = subs.size();
  report.details["inclusions"] = std::move(inclusions);
  return report;
}

Report run_check_sheaf(const RunConfig& cfg) {
  std::string source = cfg.functor.empty() ? cfg.input : cfg.functor;
  if (source.empty()) throw InputError("check-sheaf: --functor or --input is required");
  return check_sheaf(Presheaf(functor_from_json(load_json_argument(source))), cfg.bound);
}

Report run_check_embedding(const RunConfig& cfg) {
  if (!cfg.input.empty()) {
    const ShortExact ses = short_exact_from_json(read_json_file(cfg.input));
    Report report = verify_embedding_exact(ses, cfg.bound);
    report.details["sequence"] = to_json(ses);
    return report;
  }
  // Without input: every sequence generated from monos of dimension <= bound.
  Report report;
  report.name = "verify-embedding-exact";
  std::size_t sequences = 0;
  for (const auto& ses : short_exact_sequences(cfg.bound)) {
    ++sequences;
    const Report one = verify_embedding_exact(ses, cfg.bound);
    for (const auto& sec : one.sections) {
      auto& target = report.section(sec.axiom);
      target.checked += sec.checked;
      for (const auto& f : sec.failures) target.fail({{"sequence", to_json(ses)}, {"failure", f}});
    }
  }
  report.details["bound"] = cfg.bound;
  report.details["sequences"] = sequences;
  return report;
}

Report run_point_axioms(const RunConfig& cfg) {
  if (cfg.objects.size() > 1) throw InputError("point-axioms: give a single --object");
  const std::size_t u = cfg.objects.empty() ? 1 : cfg.objects.front();
  if (u > kMaxBound) throw InputError("point-axioms: --object must be <= " + std::to_string(kMaxBound));
  PointHandle p = base_point(GObj{u});
  return check_point_axioms(p, cfg.bound, cfg.depth);
}

Report run_conservativity(const RunConfig& cfg) {
  if (cfg.phi.empty()) throw InputError("conservativity: --phi is required");
  const GMor h = morphism_from_json(load_json_argument(cfg.phi));
  std::vector<GObj> us;
  for (std::size_t n : cfg.objects) {
    if (n > kMaxBound) throw InputError("conservativity: --object must be <= " + std::to_string(kMaxBound));
    us.push_back(GObj{n});
  }
  Report report = conservativity_check(yoneda_map(h), us, cfg.bound, cfg.depth);
  report.details["phi"] = to_json(h);
  return report;
}

std::string render(const Report& report, const std::string& format) {
  if (format == "text") return report.to_text();
  json j = report.to_json();
  return j.dump(2) + "\n";
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult result;
  RunConfig cfg;
  CLI::App app{"Verification driver for the category of finite powers of Z2 and its sheaves", "abcat"};
  app.require_subcommand(1);

  std::map<CLI::App*, std::function<Report(const RunConfig&)>> handlers;

  auto* va = app.add_subcommand("verify-abelian", "Check the abelian-category axioms exhaustively");
  add_common(va, cfg, false);
  va->add_option("--input", cfg.input, "Check a single morphism from this JSON file instead");
  handlers[va] = run_verify_abelian;

  auto* sf = app.add_subcommand("subfunctors", "Enumerate the subfunctors of an additive functor");
  add_common(sf, cfg, false);
  sf->add_option("--k", cfg.k, "Dimension of F(Z2)")->capture_default_str();
  sf->add_option("--variance", cfg.variance, "Functor variance")
      ->check(CLI::IsMember({"co", "contra"}))
      ->capture_default_str();
  handlers[sf] = run_subfunctors;

  auto* cs = app.add_subcommand("check-sheaf", "Check descent for every cover up to the bound");
  add_common(cs, cfg, false);
  cs->add_option("--functor", cfg.functor, "Functor as inline JSON or a file path");
  cs->add_option("--input", cfg.input, "Functor JSON file");
  handlers[cs] = run_check_sheaf;

  auto* ce = app.add_subcommand("check-embedding", "Check exactness of the Yoneda image of short exact sequences");
  add_common(ce, cfg, false);
  ce->add_option("--input", cfg.input, "Short exact sequence JSON file (default: all generated sequences)");
  handlers[ce] = run_check_embedding;

  auto* pa = app.add_subcommand("point-axioms", "Check the point axioms for a base point");
  add_common(pa, cfg, true);
  pa->add_option("--object", cfg.objects, "Dimension of the base object (default 1)");
  handlers[pa] = run_point_axioms;

  auto* cv = app.add_subcommand("conservativity", "Stalkwise isomorphism test for a Yoneda-induced map");
  add_common(cv, cfg, true);
  cv->add_option("--phi", cfg.phi, "Morphism inducing the map, as inline JSON or a file path");
  cv->add_option("--object", cfg.objects, "Base objects to test (default: all up to the bound)");
  handlers[cv] = run_conservativity;

  std::ostringstream out, err;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    result.out = out.str();
    return result;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    result.out = out.str();
    return result;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    result.exit_code = kExitUsage;
    result.err = err.str();
    return result;
  }

  if (cfg.bound > kMaxBound || cfg.depth > kMaxDepth) {
    result.exit_code = kExitUsage;
    result.err = "abcat: --bound and --depth must be <= 4\n";
    return result;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Report report;
  try {
    report = handlers.at(chosen)(cfg);
  } catch (const std::exception& e) {
    // Input errors, precondition violations and enumeration caps alike.
    result.exit_code = kExitUsage;
    result.err = std::string("abcat: ") + chosen->get_name() + ": " + e.what() + "\n";
    return result;
  }

  const std::string rendered = render(report, cfg.format);
  if (cfg.output.empty()) {
    result.out = rendered;
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file || !(file << rendered)) {
      result.exit_code = kExitUsage;
      result.err = "abcat: cannot write " + cfg.output + "\n";
      return result;
    }
  }
  result.exit_code = report.passed() ? kExitPass : kExitFailure;
  return result;
}

}  // namespace abcat
