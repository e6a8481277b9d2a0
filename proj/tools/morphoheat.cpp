#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mheat/acceptance.hpp"
#include "mheat/config.hpp"
#include "mheat/cutoff.hpp"
#include "mheat/errors.hpp"
#include "mheat/flowmap.hpp"
#include "mheat/inequalities.hpp"
#include "mheat/io.hpp"
#include "mheat/morse.hpp"
#include "mheat/solver.hpp"
#include "mheat/version.hpp"

namespace fs = std::filesystem;
using namespace mheat;

namespace {

const char* kUsage = R"(morphoheat <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]

Subcommands and their config keys (key = value; lists in brackets; # comments):

  classify        scenario | field, a (box halfwidth, default 1), density (default 9)
                  -> classify.csv: one row per critical point
  evolve          scenario | field, a, n (grid nodes/axis), slabs (default 32),
                  seeds (default 16), steps (RK4 steps, default 200), vtk (bool)
                  -> trajectories.csv, slices.csv [, slice_XXX.vtk]
  constants       quantity = poincare | trace | trace_weighted | hardy;
                  scenario | field, a, n, t_list = [..]        (domain constants)
                  hardy_a, hardy_b, hardy_p, hardy_n_list = [..]  (hardy)
                  -> constants.csv
  cutoff          scenario, a, n, slabs (default 64), eps_list = [..]
                  -> cutoff.csv: grad-theta norms and scaled strip masses, u = -phi
  counterexample  xi_list = [..] in [10, 1e6]
                  -> counterexample.csv: xi, numerator, denominator, ratio
  solve           scenario | field, a, n, slabs, form = heat | advection,
                  f = zero | one | mms-disk, u0 = zero | mms-disk | none, vtk (bool)
                  -> timeseries.csv, norms.csv [, slab_XXX.vtk]
  verify          criteria = [..] (optional subset of 1..13)
                  -> runs the acceptance suite, prints one line per criterion

Built-in analytic fields (key `field`): circle, square, shrinking-disk,
perturbed-saddle, sin-bump.

Exit codes: 0 success, 1 verify failure, 2 validation error, 3 numerical
convergence failure.
)";

LevelSetField builtin_field(const std::string& id) {
  if (id == "circle") {
    return make_analytic_field(
        2, 0.0, 1.0,
        [](const Vec& x, double) { return x[0] * x[0] + x[1] * x[1] - 1.0; },
        [](const Vec& x, double) { return vec2(2.0 * x[0], 2.0 * x[1]); },
        [](const Vec&, double) {
          Mat h{};
          h[0][0] = h[1][1] = 2.0;
          return h;
        },
        [](const Vec&, double) { return 0.0; });
  }
  if (id == "square") {
    return make_analytic_field(
        2, 0.0, 1.0,
        [](const Vec& x, double) {
          return std::max(std::abs(x[0]), std::abs(x[1])) - 1.0;
        },
        [](const Vec& x, double) {
          Vec g{0.0, 0.0, 0.0};
          if (std::abs(x[0]) >= std::abs(x[1]))
            g[0] = x[0] >= 0.0 ? 1.0 : -1.0;
          else
            g[1] = x[1] >= 0.0 ? 1.0 : -1.0;
          return g;
        },
        [](const Vec&, double) { return Mat{}; }, [](const Vec&, double) { return 0.0; });
  }
  if (id == "shrinking-disk") {
    LevelSetField f = make_normal_form(2, 0, -1);  // |x|^2 - t
    f.t_begin = 0.01;
    f.t_end = 1.0;
    return f;
  }
  if (id == "perturbed-saddle") {
    return make_analytic_field(
        2, -1.0, 1.0,
        [](const Vec& x, double t) {
          return -x[0] * x[0] + x[1] * x[1] + t + 0.1 * x[0] * x[0] * x[0];
        },
        [](const Vec& x, double) {
          return vec2(-2.0 * x[0] + 0.3 * x[0] * x[0], 2.0 * x[1]);
        },
        [](const Vec& x, double) {
          Mat h{};
          h[0][0] = -2.0 + 0.6 * x[0];
          h[1][1] = 2.0;
          return h;
        },
        [](const Vec&, double) { return 1.0; });
  }
  if (id == "sin-bump") {
    return make_analytic_field(
        2, -1.0, 1.0,
        [](const Vec& x, double t) { return std::sin(x[0]) + x[1] * x[1] + t; },
        [](const Vec& x, double) { return vec2(std::cos(x[0]), 2.0 * x[1]); },
        [](const Vec& x, double) {
          Mat h{};
          h[0][0] = -std::sin(x[0]);
          h[1][1] = 2.0;
          return h;
        },
        [](const Vec&, double) { return 1.0; });
  }
  throw argument_error("unknown built-in field: " + id);
}

struct Cli {
  std::string subcommand;
  std::string config_path;
  std::string out_dir = ".";
  unsigned long long seed = 0;
  int threads = 0;
};

LevelSetField resolve_field(const RunConfig& cfg, double a, std::string& name) {
  if (cfg.has("scenario")) {
    name = cfg.get_string("scenario");
    return make_scenario_windowed(name, a);
  }
  if (cfg.has("field")) {
    name = cfg.get_string("field");
    return builtin_field(name);
  }
  throw argument_error("config needs either 'scenario' or 'field'");
}

SourceFn source_spec(const std::string& id) {
  if (id == "zero") return [](const Vec&, double) { return 0.0; };
  if (id == "one") return [](const Vec&, double) { return 1.0; };
  if (id == "mms-disk")
    return [](const Vec& x, double t) {
      return std::exp(-t) * (3.0 + x[0] * x[0] + x[1] * x[1]);
    };
  throw argument_error("unknown source spec: " + id);
}

int cmd_classify(const Cli& cli, const RunConfig& cfg, const std::string& provenance) {
  const double a = cfg.get_double("a", 1.0);
  std::string name;
  const LevelSetField field = resolve_field(cfg, a, name);
  const int density = cfg.get_int("density", 9);
  const SpaceTimeBox box{a, field.t_begin, field.t_end};
  const auto cps = find_critical_points(field, box, density);

  CsvWriter csv((fs::path(cli.out_dir) / "classify.csv").string(),
                {"scenario", "dim", "t_c", "x1", "x2", "x3", "lambda1", "lambda2",
                 "lambda3", "phi_t", "label", "res_grad", "res_phi"},
                provenance);
  for (const CriticalPoint& cp : cps) {
    csv.row({name, CsvWriter::num(field.dim), CsvWriter::num(cp.t),
             CsvWriter::num(cp.x[0]), CsvWriter::num(cp.x[1]),
             field.dim == 3 ? CsvWriter::num(cp.x[2]) : "",
             CsvWriter::num(cp.spectrum[0]), CsvWriter::num(cp.spectrum[1]),
             field.dim == 3 ? CsvWriter::num(cp.spectrum[2]) : "",
             CsvWriter::num(cp.phi_t), to_string(cp.scenario),
             CsvWriter::num(cp.res_grad), CsvWriter::num(cp.res_phi)});
  }
  std::cout << "classify: " << cps.size() << " critical point(s) -> classify.csv\n";
  return 0;
}

int cmd_evolve(const Cli& cli, const RunConfig& cfg, const std::string& provenance) {
  const double a = cfg.get_double("a", 1.0);
  std::string name;
  const LevelSetField field = resolve_field(cfg, a, name);
  const BackgroundGrid grid(field.dim, a, cfg.get_int("n", 65));
  const int slabs = cfg.get_int("slabs", 32);
  const int nseeds = cfg.get_int("seeds", 16);
  const int steps = cfg.get_int("steps", 200);
  const bool vtk = cfg.get_bool("vtk", false);
  if (slabs < 1 || nseeds < 1 || steps < 1)
    throw argument_error("evolve: slabs, seeds and steps must be positive");

  const SpaceTimeBox box{a, field.t_begin, field.t_end};
  const auto cps = find_critical_points(field, box, 8);

  // Geometry time series.
  CsvWriter slices_csv((fs::path(cli.out_dir) / "slices.csv").string(),
                       {"t", "volume", "boundary", "components", "holes"}, provenance);
  for (int k = 0; k <= slabs; ++k) {
    const double t = field.t_begin + (field.t_end - field.t_begin) * k / slabs;
    const DomainSlice slice = build_slice(field, grid, t);
    slices_csv.row({CsvWriter::num(t), CsvWriter::num(slice.volume),
                    CsvWriter::num(slice.boundary_measure),
                    CsvWriter::num(slice.num_components),
                    CsvWriter::num(bounded_complement_components(slice))});
    if (vtk) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "slice_%03d.vtk", k);
      write_vtk_slice((fs::path(cli.out_dir) / buf).string(), field, slice);
    }
  }

  // Boundary-seeded trajectories.
  const DomainSlice start = build_slice(field, grid, field.t_begin);
  CsvWriter traj_csv((fs::path(cli.out_dir) / "trajectories.csv").string(),
                     {"seed", "t", "x1", "x2", "x3", "abs_phi"}, provenance);
  if (!start.facets.empty()) {
    const std::size_t stride = std::max<std::size_t>(1, start.facets.size() / nseeds);
    int seed_id = 0;
    for (std::size_t fidx = 0; fidx < start.facets.size() && seed_id < nseeds;
         fidx += stride, ++seed_id) {
      // Facet vertices sit on Gamma(t) (root-polished); centroids only nearly.
      const Vec y = start.facets[fidx].v[0];
      const Trajectory traj =
          advect(field, y, field.t_begin, field.t_end, steps, cps);
      for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Vec& x = traj.points[s];
        traj_csv.row({CsvWriter::num(seed_id), CsvWriter::num(traj.times[s]),
                      CsvWriter::num(x[0]), CsvWriter::num(x[1]),
                      field.dim == 3 ? CsvWriter::num(x[2]) : "",
                      CsvWriter::num(std::abs(field.eval(x, traj.times[s])))});
      }
    }
  }
  std::cout << "evolve: wrote slices.csv and trajectories.csv\n";
  return 0;
}

int cmd_constants(const Cli& cli, const RunConfig& cfg, const std::string& provenance) {
  const std::string quantity = cfg.get_string("quantity");
  CsvWriter csv((fs::path(cli.out_dir) / "constants.csv").string(),
                {"quantity", "scenario", "t", "a", "b", "p", "n", "value", "iterations"},
                provenance);
  if (quantity == "hardy") {
    const double ha = cfg.get_double("hardy_a");
    const double hb = cfg.get_double("hardy_b");
    const double hp = cfg.get_double("hardy_p");
    const auto ns = cfg.get_list("hardy_n_list");
    if (ns.empty()) throw argument_error("constants: empty hardy_n_list");
    for (double nd : ns) {
      const auto est = hardy_constant(ha, hb, hp, static_cast<int>(nd));
      csv.row({est.quantity, "", "", CsvWriter::num(est.a), CsvWriter::num(est.b),
               CsvWriter::num(est.p), CsvWriter::num(est.n), CsvWriter::num(est.value),
               CsvWriter::num(est.iterations)});
    }
  } else if (quantity == "poincare" || quantity == "trace" ||
             quantity == "trace_weighted") {
    const double a = cfg.get_double("a", 1.0);
    std::string name;
    const LevelSetField field = resolve_field(cfg, a, name);
    const BackgroundGrid grid(field.dim, a, cfg.get_int("n", 97));
    const auto ts = cfg.get_list("t_list");
    if (ts.empty()) throw argument_error("constants: empty t_list");
    for (double t : ts) {
      if (t < field.t_begin || t > field.t_end) continue;
      try {
        const ConstantEstimate est =
            quantity == "poincare"
                ? poincare_constant(field, grid, t)
                : trace_constant(field, grid, t, quantity == "trace_weighted");
        csv.row({est.quantity, name, CsvWriter::num(t), "", "", "",
                 CsvWriter::num(est.n), CsvWriter::num(est.value),
                 CsvWriter::num(est.iterations)});
      } catch (const empty_domain_error&) {
        continue;
      }
    }
  } else {
    throw argument_error("constants: unknown quantity '" + quantity + "'");
  }
  std::cout << "constants: wrote constants.csv\n";
  return 0;
}

int cmd_cutoff(const Cli& cli, const RunConfig& cfg, const std::string& provenance) {
  const double a = cfg.get_double("a", 1.0);
  std::string name;
  // Raw normal forms here: u = -phi vanishes on the true lateral boundary,
  // which is what the sweep needs; the grid box only truncates quadrature.
  const LevelSetField field = cfg.has("scenario")
                                  ? (name = cfg.get_string("scenario"), make_scenario(name))
                                  : resolve_field(cfg, a, name);
  const BackgroundGrid grid(field.dim, a, cfg.get_int("n", 97));
  const int slabs = cfg.get_int("slabs", 64);
  const auto eps = cfg.get_list("eps_list");
  if (eps.empty()) throw argument_error("cutoff: empty eps_list");
  auto u = [&field](const Vec& x, double t) { return -field.eval(x, t); };
  const auto norms = grad_theta_norm_sweep(field, grid, u, eps, slabs);
  const auto masses = small_strip_mass(field, grid, u, eps, slabs);

  CsvWriter csv((fs::path(cli.out_dir) / "cutoff.csv").string(),
                {"scenario", "eps", "grad_theta_norm", "strip_mass"}, provenance);
  for (std::size_t i = 0; i < eps.size(); ++i)
    csv.row({name, CsvWriter::num(eps[i]), CsvWriter::num(norms[i]),
             CsvWriter::num(masses[i])});
  std::cout << "cutoff: wrote cutoff.csv\n";
  return 0;
}

int cmd_counterexample(const Cli& cli, const RunConfig& cfg,
                       const std::string& provenance) {
  const auto xi = cfg.get_list("xi_list");
  if (xi.empty()) throw argument_error("counterexample: empty xi_list");
  const auto recs = hole_counterexample(xi);
  CsvWriter csv((fs::path(cli.out_dir) / "counterexample.csv").string(),
                {"xi", "numerator", "denominator", "ratio"}, provenance);
  for (const auto& r : recs)
    csv.row({CsvWriter::num(r.xi), CsvWriter::num(r.numerator),
             CsvWriter::num(r.denominator), CsvWriter::num(r.ratio)});
  std::cout << "counterexample: wrote counterexample.csv\n";
  return 0;
}

int cmd_solve(const Cli& cli, const RunConfig& cfg, const std::string& provenance) {
  const double a = cfg.get_double("a", 1.0);
  std::string name;
  LevelSetField field = resolve_field(cfg, a, name);
  const BackgroundGrid grid(field.dim, a, cfg.get_int("n", 65));
  const int slabs = cfg.get_int("slabs", 32);
  const bool vtk = cfg.get_bool("vtk", false);

  const std::string form_id = cfg.get_string("form", "heat");
  BilinearFormSpec form = BilinearFormSpec::heat();
  if (form_id == "advection") {
    form = BilinearFormSpec::advection_with(
        [field](const Vec& x, double t) { return velocity_field(field, x, t); });
  } else if (form_id != "heat") {
    throw argument_error("solve: unknown form '" + form_id + "'");
  }

  const SourceFn f = source_spec(cfg.get_string("f", "zero"));
  const std::string u0_id = cfg.get_string("u0", "zero");
  InitialFn u0;
  if (u0_id == "zero")
    u0 = [](const Vec&) { return 0.0; };
  else if (u0_id == "mms-disk") {
    const double t0 = field.t_begin;
    u0 = [t0](const Vec& x) {
      return (1.0 - x[0] * x[0] - x[1] * x[1]) * std::exp(-t0);
    };
  } else if (u0_id == "none")
    u0 = nullptr;
  else
    throw argument_error("solve: unknown u0 spec '" + u0_id + "'");

  const SpaceTimeSolution sol = solve(field, grid, slabs, f, u0, form);

  CsvWriter ts_csv((fs::path(cli.out_dir) / "timeseries.csv").string(),
                   {"t", "norm_u", "volume", "components"}, provenance);
  for (int n = 0; n <= slabs; ++n) {
    const DomainSlice slice = build_slice(field, grid, sol.slabs[static_cast<std::size_t>(n)].t);
    ts_csv.row({CsvWriter::num(sol.slabs[static_cast<std::size_t>(n)].t),
                CsvWriter::num(sol.slab_l2[static_cast<std::size_t>(n)]),
                CsvWriter::num(slice.volume), CsvWriter::num(slice.num_components)});
    if (vtk) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "slab_%03d.vtk", n);
      write_vtk_slice((fs::path(cli.out_dir) / buf).string(), field, slice);
    }
  }

  CsvWriter norms_csv((fs::path(cli.out_dir) / "norms.csv").string(),
                      {"name", "value"}, provenance);
  norms_csv.row({"l2_Q", CsvWriter::num(sol.norms.l2_Q)});
  norms_csv.row({"grad_Q", CsvWriter::num(sol.norms.grad_Q)});
  norms_csv.row({"h", CsvWriter::num(sol.norms.h)});
  norms_csv.row({"dual_ut", CsvWriter::num(sol.norms.dual_ut)});
  norms_csv.row({"w", CsvWriter::num(sol.norms.w)});
  norms_csv.row({"f_dual", CsvWriter::num(sol.norms.f_dual)});
  norms_csv.row({"trace_ratio", CsvWriter::num(trace_in_time_ratio(sol))});
  std::cout << "solve: wrote timeseries.csv and norms.csv\n";
  return 0;
}

int cmd_verify(const Cli&, const RunConfig& cfg, const std::string&) {
  std::vector<int> which;
  for (double v : cfg.get_list("criteria", {})) which.push_back(static_cast<int>(v));
  const auto results = run_acceptance(std::cout, which);
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    std::cout << kUsage;
    return args.empty() ? 2 : 0;
  }
  cli.subcommand = args[0];
  for (std::size_t i = 1; i < args.size(); ++i) {
    auto need_value = [&](const char* flag) -> std::string {
      if (i + 1 >= args.size()) {
        std::cerr << "missing value for " << flag << "\n";
        std::exit(2);
      }
      return args[++i];
    };
    if (args[i] == "--config")
      cli.config_path = need_value("--config");
    else if (args[i] == "--out")
      cli.out_dir = need_value("--out");
    else if (args[i] == "--seed")
      cli.seed = std::stoull(need_value("--seed"));
    else if (args[i] == "--threads")
      cli.threads = std::stoi(need_value("--threads"));
    else if (args[i] == "--help" || args[i] == "-h") {
      std::cout << kUsage;
      return 0;
    } else {
      std::cerr << "unknown flag: " << args[i] << "\n" << kUsage;
      return 2;
    }
  }
  set_threads(cli.threads);

  try {
    RunConfig cfg;
    unsigned long long cfg_hash = 0;
    if (!cli.config_path.empty()) {
      cfg = RunConfig::parse_file(cli.config_path);
      cfg_hash = fnv1a_file(cli.config_path);
    } else if (cli.subcommand != "verify") {
      std::cerr << "--config is required for '" << cli.subcommand << "'\n";
      return 2;
    }
    if (!fs::exists(cli.out_dir) && !fs::create_directories(cli.out_dir)) {
      std::cerr << "cannot create output directory: " << cli.out_dir << "\n";
      return 2;
    }
    std::ostringstream prov;
    prov << "morphoheat " << kVersion << " config=" << std::hex << cfg_hash
         << std::dec << " seed=" << cli.seed;
    const std::string provenance = prov.str();

    if (cli.subcommand == "classify") return cmd_classify(cli, cfg, provenance);
    if (cli.subcommand == "evolve") return cmd_evolve(cli, cfg, provenance);
    if (cli.subcommand == "constants") return cmd_constants(cli, cfg, provenance);
    if (cli.subcommand == "cutoff") return cmd_cutoff(cli, cfg, provenance);
    if (cli.subcommand == "counterexample") return cmd_counterexample(cli, cfg, provenance);
    if (cli.subcommand == "solve") return cmd_solve(cli, cfg, provenance);
    if (cli.subcommand == "verify") return cmd_verify(cli, cfg, provenance);
    std::cerr << "unknown subcommand: " << cli.subcommand << "\n" << kUsage;
    return 2;
  } catch (const argument_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const empty_domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
