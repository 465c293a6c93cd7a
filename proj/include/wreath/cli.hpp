#pragma once

// Batch front end. Exit codes: 0 pass, 1 a mathematical check failed,
// 2 usage or input error, 3 internal invariant violation.

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wreath/bcmap.hpp"
#include "wreath/telescope.hpp"

namespace wreath {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitInternal = 3 };

struct RunConfig {
  std::string group;
  int n = 1;
  int radius = 1;
  int levels = 2;
  int bound = 2;
  std::string side = "analytic";
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t samples = 100;
  std::string export_path;
};

/// Thrown for bad flag combinations the parser cannot see.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace cli_detail {

inline std::vector<Side> sides(const std::string& s) {
  if (s == "analytic") return {Side::analytic};
  if (s == "topological") return {Side::topological};
  return {Side::analytic, Side::topological};
}

inline void check_config(const RunConfig& run) {
  if (run.n < 1) throw UsageError("-n must be >= 1");
  if (run.radius < 0) throw UsageError("--radius must be >= 0");
}

inline int cmd_k(const RunConfig& run, std::ostream& out) {
  check_config(run);
  const auto spec = resolve_group(run.group);
  ReportOptions opt;
  opt.witness_sample = run.samples;
  opt.seed = run.seed;
  std::vector<KGroupReport> reports;
  for (Side s : sides(run.side)) reports.push_back(k_report(spec, s, run.n, run.radius, opt));
  if (run.format == "json") {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r, spec));
    out << arr.dump(2) << '\n';
  } else {
    write_csv_header(out);
    for (const auto& r : reports) write_csv(out, r, spec);
  }
  return kExitPass;
}

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

inline std::vector<Check> run_checks(const FiniteGroupSpec& spec, Side side,
                                     const RunConfig& run) {
  std::vector<Check> checks;
  const std::string tag = std::string(to_string(side)) + ":";
  const TruncatedModule m(spec, side, run.n, run.radius);
  const auto psi = psi_matrix(m);

  const auto cert = verify_kernel_lemma(m, psi);
  checks.push_back({tag + "kernel", cert.holds,
                    "rank " + std::to_string(cert.kernel_rank) + "; " + cert.detail});

  // canonical forms against a union-find orbit partition
  {
    const auto part = orbit_oracle(m.labels(), run.n, run.radius);
    const auto canon = enumerate_canonical(m.labels(), run.n, run.radius);
    Check c{tag + "orbits", true,
            std::to_string(part.class_count) + " orbits, " +
                std::to_string(canon.size()) + " canonical forms"};
    std::vector<std::optional<std::size_t>> rep(part.class_count);
    for (std::size_t i = 0; i < part.configs.size() && c.pass; ++i) {
      if (!is_canonical(part.configs[i])) continue;
      auto& slot = rep[part.klass[i]];
      if (slot) {
        c.pass = false;
        c.detail = "two canonical forms in one orbit: " +
                   serialize(part.configs[*slot], m.labels()) + " and " +
                   serialize(part.configs[i], m.labels());
      }
      slot = i;
    }
    if (c.pass && part.class_count != canon.size()) {
      c.pass = false;
      for (std::size_t k = 0; k < rep.size(); ++k) {
        if (rep[k]) continue;
        for (std::size_t i = 0; i < part.configs.size(); ++i) {
          if (part.klass[i] == k) {
            c.detail = "orbit without canonical form: " +
                       serialize(part.configs[i], m.labels());
            break;
          }
        }
        break;
      }
    }
    checks.push_back(std::move(c));
  }

  // constructive coinvariance on a seeded sample
  std::mt19937_64 rng(run.seed);
  {
    std::vector<const Config*> targets;
    for (const auto& x : m.basis())
      if (!is_canonical(x)) targets.push_back(&x);
    std::shuffle(targets.begin(), targets.end(), rng);
    if (targets.size() > run.samples) targets.resize(run.samples);
    Check c{tag + "witness", true, std::to_string(targets.size()) + " witnesses"};
    for (const Config* x : targets) {
      if (!check_witness(m, psi, *x, telescoping_witness(m, *x))) {
        c.pass = false;
        c.detail = "psi(w) != x - canon(x) for " + serialize(*x, m.labels());
        break;
      }
    }
    checks.push_back(std::move(c));
  }

  // seeded equivariance: canon(g . x) = canon(x)
  {
    const auto moves = ball(run.n, 2 * run.radius + 1);
    std::uniform_int_distribution<std::size_t> pick_x(0, m.basis().size() - 1);
    std::uniform_int_distribution<std::size_t> pick_g(0, moves.size() - 1);
    Check c{tag + "equivariance", true,
            std::to_string(run.samples) + " samples, seed " + std::to_string(run.seed)};
    for (std::size_t k = 0; k < run.samples; ++k) {
      const Config& x = m.basis()[pick_x(rng)];
      const Word g = moves[pick_g(rng)];
      const auto a = canonicalize(x, run.n), b = canonicalize(translate(g, x), run.n);
      if (!(a.config == b.config)) {
        c.pass = false;
        c.detail = "canon differs for " + serialize(x, m.labels()) + " moved by " +
                   g.render();
        break;
      }
    }
    checks.push_back(std::move(c));
  }

  // torsion-freeness of coker psi
  {
    const auto inv = cokernel_invariants(psi.matrix);
    Check c{tag + "torsion", inv.torsion.empty(), "free rank " + std::to_string(inv.free_rank)};
    if (!c.pass) c.detail = "torsion coefficient " + inv.torsion.front().str();
    checks.push_back(std::move(c));
  }
  return checks;
}

inline int cmd_verify(const RunConfig& run, std::ostream& out) {
  check_config(run);
  const auto spec = resolve_group(run.group);
  std::vector<Check> checks;
  for (Side s : sides(run.side)) {
    auto c = run_checks(spec, s, run);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  if (run.side == "both") {
    const auto a = assembly_map(spec, run.n, run.radius);
    checks.push_back({"assembly", a.bijective,
                      std::to_string(a.topological_size) + " -> " +
                          std::to_string(a.analytic_size)});
  }
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  if (run.format == "json") {
    nlohmann::ordered_json j;
    j["group"] = spec.name();
    j["n"] = run.n;
    j["radius"] = run.radius;
    j["seed"] = run.seed;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
      arr.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = std::move(arr);
    j["pass"] = all;
    out << j.dump(2) << '\n';
  } else {
    out << "check,pass,detail\n";
    for (const auto& c : checks)
      out << csv_quote(c.name) << ',' << (c.pass ? "PASS" : "FAIL") << ','
          << csv_quote(c.detail) << '\n';
  }
  return all ? kExitPass : kExitFail;
}

inline int cmd_telescope(const RunConfig& run, std::ostream& out) {
  check_config(run);
  if (run.levels < 2) throw UsageError("--levels must be >= 2");
  const auto spec = resolve_group(run.group);
  const auto t = build_telescope(spec, run.n, run.radius, run.levels);
  const auto& cx = t.complex();
  const auto h = homology(cx);
  std::array<std::size_t, 4> kinds{};
  for (const auto& dim : cx.cells)
    for (const auto& c : dim) ++kinds[static_cast<int>(c.kind)];
  std::optional<DomainCensus> census;
  if (run.radius >= 1) census = fundamental_domain_cells(t);

  if (!run.export_path.empty()) {
    std::ofstream f(run.export_path);
    if (!f) throw UsageError("cannot write '" + run.export_path + "'");
    f << export_complex(t).dump(1) << '\n';
  }

  const bool contractible = h[0].is_z() && h[1].is_zero() && h[2].is_zero() &&
                            cx.euler_characteristic() == 1;
  const bool census_ok = !census || census->meets_once;
  if (run.format == "json") {
    nlohmann::ordered_json j;
    j["group"] = spec.name();
    j["n"] = run.n;
    j["radius"] = run.radius;
    j["levels"] = run.levels;
    nlohmann::ordered_json cells;
    for (auto k : {CellKind::tree_vertex, CellKind::tree_edge, CellKind::vertical_edge,
                   CellKind::square})
      cells[to_string(k)] = kinds[static_cast<int>(k)];
    j["cells"] = std::move(cells);
    j["euler_characteristic"] = cx.euler_characteristic();
    j["H0"] = h[0].describe();
    j["H1"] = h[1].describe();
    j["H2"] = h[2].describe();
    if (census) {
      nlohmann::ordered_json c;
      c["domain_cells"] = census->domain_cells;
      for (auto k : {CellKind::tree_vertex, CellKind::tree_edge, CellKind::vertical_edge,
                     CellKind::square})
        c[std::string("domain_") + to_string(k)] =
            census->domain_by_kind[static_cast<int>(k)];
      c["interior_cells"] = census->interior_cells;
      c["frontier_cells"] = census->frontier_cells;
      c["orbits_met"] = census->orbits_met;
      c["meets_once"] = census->meets_once;
      c["translates_disjoint"] = census->translates_disjoint;
      if (!census->counterexample.empty()) c["counterexample"] = census->counterexample;
      j["census"] = std::move(c);
    }
    out << j.dump(2) << '\n';
  } else {
    out << "key,value\n";
    out << "group," << csv_quote(spec.name()) << "\nn," << run.n << "\nradius,"
        << run.radius << "\nlevels," << run.levels << '\n';
    for (auto k : {CellKind::tree_vertex, CellKind::tree_edge, CellKind::vertical_edge,
                   CellKind::square})
      out << to_string(k) << ',' << kinds[static_cast<int>(k)] << '\n';
    out << "euler_characteristic," << cx.euler_characteristic() << "\nH0,"
        << h[0].describe() << "\nH1," << h[1].describe() << "\nH2," << h[2].describe()
        << '\n';
    if (census) {
      out << "domain_cells," << census->domain_cells << "\ninterior_cells,"
          << census->interior_cells << "\nfrontier_cells," << census->frontier_cells
          << "\norbits_met," << census->orbits_met << "\nmeets_once,"
          << (census->meets_once ? "true" : "false") << '\n';
    }
  }
  return contractible && census_ok ? kExitPass : kExitFail;
}

inline int cmd_trace(const RunConfig& run, std::ostream& out) {
  if (run.bound < 0) throw UsageError("--bound must be >= 0");
  const auto spec = resolve_group(run.group);
  const auto r = trace_image(spec, run.bound);
  if (run.format == "json") {
    out << to_json(r, spec.name()).dump(2) << '\n';
  } else {
    write_csv(out, r, spec.name());
  }
  return r.holds ? kExitPass : kExitFail;
}

}  // namespace cli_detail

/// Maps an escaped exception to the exit-code contract and reports it.
inline int exit_code_for(std::exception_ptr e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const InvariantViolation& x) {
    err << "internal error: " << x.what() << '\n';
    return kExitInternal;
  } catch (const BoundaryError& x) {
    err << "internal error: " << x.what() << '\n';
    return kExitInternal;
  } catch (const std::invalid_argument& x) {  // group documents, words, flags
    err << "error: " << x.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& x) {  // truncation size guards
    err << "error: " << x.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& x) {
    err << "internal error: " << x.what() << '\n';
    return kExitInternal;
  } catch (...) {
    err << "internal error: unknown exception\n";
    return kExitInternal;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"K-theory of lamplighter-type wreath products F wr F_n"};
  app.require_subcommand(1);
  RunConfig run;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", run.group, "builtin name or group document")->required();
    sub->add_option("-n", run.n, "rank of the free group")->check(CLI::PositiveNumber);
  };
  auto formatted = [&](CLI::App* sub) {
    sub->add_option("--format", run.format)->check(CLI::IsMember({"json", "csv"}));
  };

  auto* k = app.add_subcommand("k", "K_0 basis and K_1 rank");
  common(k);
  formatted(k);
  k->add_option("--radius", run.radius)->check(CLI::NonNegativeNumber);
  k->add_option("--side", run.side)->check(CLI::IsMember({"analytic", "topological", "both"}));
  k->add_option("--seed", run.seed);
  k->add_option("--samples", run.samples, "telescoping witnesses to check");

  auto* verify = app.add_subcommand("verify", "run the structural checks");
  common(verify);
  formatted(verify);
  std::string verify_side = "both";
  verify->add_option("--radius", run.radius)->check(CLI::NonNegativeNumber);
  verify->add_option("--side", verify_side)
      ->check(CLI::IsMember({"analytic", "topological", "both"}));
  verify->add_option("--seed", run.seed);
  verify->add_option("--samples", run.samples);

  auto* tel = app.add_subcommand("telescope", "build and check a telescope truncation");
  common(tel);
  formatted(tel);
  tel->add_option("--radius", run.radius)->check(CLI::NonNegativeNumber);
  tel->add_option("--levels", run.levels);
  tel->add_option("--export", run.export_path, "write the cell complex as JSON");

  auto* trace = app.add_subcommand("trace", "trace image of K_0");
  trace->add_option("--group", run.group)->required();
  formatted(trace);
  trace->add_option("--bound", run.bound, "support bound");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*k) return cli_detail::cmd_k(run, out);
    if (*verify) {
      run.side = verify_side;
      return cli_detail::cmd_verify(run, out);
    }
    if (*tel) return cli_detail::cmd_telescope(run, out);
    return cli_detail::cmd_trace(run, out);
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

}  // namespace wreath
