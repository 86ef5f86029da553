#include "landau/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "landau/analysis.hpp"
#include "landau/coefficients.hpp"
#include "landau/fields.hpp"
#include "landau/io.hpp"
#include "landau/solver.hpp"

namespace landau {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

CheckResult check(std::string name, bool pass, std::string detail) { return {std::move(name), pass, std::move(detail)}; }

/// Largest |tr A - a| relative to max |a|, and largest |div A - grad a| relative to max |grad a|.
std::pair<double, double> identity_errors(const Field& f) {
  CoefficientSolver solver(f.grid());
  const CoefficientSet c = solver.compute(f);
  const VecField div = solver.diffusion_divergence(f);
  double tr = 0.0, amax = 0.0, dv = 0.0, gmax = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    tr = std::max(tr, std::abs(c.A(0, 0)[i] + c.A(1, 1)[i] + c.A(2, 2)[i] - c.a[i]));
    amax = std::max(amax, std::abs(c.a[i]));
    for (int d = 0; d < 3; ++d) {
      dv = std::max(dv, std::abs(div[d][i] - c.grad_a[d][i]));
      gmax = std::max(gmax, std::abs(c.grad_a[d][i]));
    }
  }
  return {tr / amax, dv / gmax};
}

}  // namespace

std::vector<CheckResult> invariant_suite(int n, double extent) {
  std::vector<CheckResult> out;
  const Grid grid(n, extent);
  const double h = grid.spacing();
  const Field mu = maxwellian(grid);
  const CoefficientSet cmu = compute_coefficients(mu);

  {
    std::vector<std::array<double, 3>> pts;
    for (int s = 0; s < 10; ++s) {
      const int i = n / 2 + ((s % 5) - 2), j = n / 2 + ((s * 3) % 7 - 3), k = n / 2 + (s % 3) - 1 + (s > 6 ? 2 : 0);
      pts.push_back({grid.node(i), grid.node(j), grid.node(k)});
    }
    const auto direct = direct_quadrature_coefficients(mu, pts);
    double amax = 0.0, Amax = sup_norm(cmu.A), gmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      amax = std::max(amax, std::abs(cmu.a[i]));
      for (int d = 0; d < 3; ++d) gmax = std::max(gmax, std::abs(cmu.grad_a[d][i]));
    }
    double err = 0.0;
    for (const auto& pc : direct) {
      double idx_d[3];
      for (int d = 0; d < 3; ++d) idx_d[d] = std::round((pc.velocity[d] + extent) / h);
      const std::size_t idx = grid.index(int(idx_d[0]), int(idx_d[1]), int(idx_d[2]));
      err = std::max(err, std::abs(cmu.a[idx] - pc.a) / amax);
      for (int c = 0; c < 6; ++c) err = std::max(err, std::abs(cmu.A.components[c][idx] - pc.A[c]) / Amax);
      for (int d = 0; d < 3; ++d) err = std::max(err, std::abs(cmu.grad_a[d][idx] - pc.grad_a[d]) / gmax);
    }
    out.push_back(check("oracle_equivalence", err <= 1e-3, "max relative deviation " + sci(err)));
    const double a0 = cmu.a[grid.index(n / 2, n / 2, n / 2)];
    const double exact = std::pow(2.0 * std::numbers::pi, -1.5);
    out.push_back(check("maxwellian_potential_origin", std::abs(a0 - exact) <= 2e-4, "|a(0) - (2pi)^-3/2| " + sci(std::abs(a0 - exact))));
  }

  {
    SimConfig cfg;
    cfg.n = n;
    cfg.extent = extent;
    cfg.initial = TwoBump{};
    const Field bump = initial_datum(cfg);
    double tr = 0.0, dv = 0.0;
    for (const Field* f : {&mu, &bump}) {
      const auto [t, d] = identity_errors(*f);
      tr = std::max(tr, t);
      dv = std::max(dv, d);
    }
    out.push_back(check("trace_identity", tr <= 1e-10, "max |tr A - a| / max|a| " + sci(tr)));
    out.push_back(check("divergence_identity", dv <= 1e-8, "max |div A - grad a| / max|grad a| " + sci(dv)));

    const CoefficientSet cb = compute_coefficients(bump);
    const Field r = rhs(bump, cb);
    const double dt = stable_dt(bump, cb, 0.5);
    const Field next = step(bump, dt);
    const double m0 = integrate(bump), m1 = integrate(next);
    const double drift = std::abs(m1 - m0) / m0;
    out.push_back(check("mass_conservation", drift <= 1e-12 && std::abs(integrate(r)) <= 1e-12 * m0,
                        "relative mass change per step " + sci(drift)));
  }

  {
    const Field r = rhs(mu, cmu);
    const double dt = stable_dt(mu, cmu, 0.5);
    const double dev = (step(mu, dt) - mu).max_abs();
    out.push_back(check("steady_state", r.max_abs() <= 5e-3 && dev <= dt * 5e-3,
                        "||rhs(mu)||_inf " + sci(r.max_abs()) + ", ||step(mu) - mu||_inf " + sci(dev)));
  }

  {
    SimConfig cfg;
    cfg.n = n;
    cfg.extent = extent;
    cfg.t_end = 0.3;
    cfg.cfl = 0.25;
    cfg.initial = AnisotropicGaussian{{0.8, 1.0, 1.2}};
    const Trajectory traj = run(cfg);
    double rise = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < traj.scalars.size(); ++i) rise = std::max(rise, traj.scalars[i].entropy - traj.scalars[i - 1].entropy);
    const auto& a = traj.scalars.front();
    const auto& b = traj.scalars.back();
    const double de = std::abs(b.energy - a.energy) / a.energy;
    double dp = 0.0;
    for (int d = 0; d < 3; ++d) dp = std::max(dp, std::abs(b.momentum[d] - a.momentum[d]) / std::sqrt(3.0 * a.mass));
    out.push_back(check("entropy_monotone", !traj.abort_time && rise <= 1e-9, "largest entropy increase per step " + sci(rise)));
    out.push_back(check("momentum_energy_drift", de <= 1e-2 && dp <= 1e-2, "energy " + sci(de) + ", momentum " + sci(dp)));
  }

  {
    const ExponentSet e = exponents(2.0, 55.0);
    const bool exact = std::abs(e.gamma - 46.0 / 165) <= 1e-12 && std::abs(e.beta0 - 1.0 / 3) <= 1e-12 &&
                       std::abs(e.beta1 - 101.0 / 165) <= 1e-12 && std::abs(e.beta2 - 3.0 / 55) <= 1e-12 &&
                       std::abs(e.alpha - 5.0 / 6) <= 1e-12;
    double worst = 0.0;
    for (double p : {1.6, 2.0, 2.5, 3.0, 4.0})
      for (double m : {10.0, 20.0, 55.0, 100.0}) {
        const ExponentSet x = exponents(p, m);
        worst = std::max(worst, std::abs(x.gamma - x.gamma_alt));
      }
    out.push_back(check("exponent_algebra", exact && worst <= 1e-12, "max |gamma - (q - p - 1)| " + sci(worst)));
  }

  {
    SimConfig cfg;
    cfg.n = n;
    cfg.extent = extent;
    cfg.initial = PerturbedMaxwellian{0.3, 2};
    const Field f = initial_datum(cfg);
    const Field r1 = rhs(f, compute_coefficients(f));
    const Field r2 = rhs(f, compute_coefficients(f));
    const bool same = std::equal(r1.values().begin(), r1.values().end(), r2.values().begin());
    out.push_back(check("determinism", same, same ? "bit-identical" : "rhs differs between evaluations"));
  }
  return out;
}

namespace {

struct Paths {
  std::string config, out, dir;
};

int cmd_run(const Paths& paths, std::ostream& out, std::ostream& err) {
  SimConfig cfg;
  try {
    cfg = parse_config(paths.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  RunManifest man;
  man.config = cfg;
  man.version = version_string();
  man.start_time = utc_timestamp();
  const Trajectory traj = run(cfg);
  write_trajectory(traj, paths.out);
  man.end_time = utc_timestamp();
  man.outputs = {(fs::path(paths.out) / kScalarsFile).string(), (fs::path(paths.out) / kTrajectoryMetaFile).string()};
  if (traj.abort_time) man.abort_reason = traj.abort_reason;
  write_manifest(man, paths.out);
  out << "steps " << traj.scalars.size() - 1 << ", snapshots " << traj.snapshots.size() << ", t = " << traj.scalars.back().time
      << "\n";
  if (traj.abort_time) out << "aborted: " << traj.abort_reason << "\n";
  out << "wrote " << paths.out << "\n";
  return 0;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

template <class Fn>
json guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return json{{"error", e.what()}};
  }
}

int cmd_diagnose(const Paths& paths, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(paths.dir)) {
    err << "error: trajectory directory not found: " << paths.dir << "\n";
    return 2;
  }
  Trajectory traj(Grid(8, 1.0));
  try {
    traj = read_trajectory(paths.dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const fs::path dest = paths.out.empty() ? fs::path(paths.dir) / "diagnostics" : fs::path(paths.out);
  fs::create_directories(dest);
  const double p = traj.p, m = traj.m;
  const double t_end = traj.times.back();
  json report;
  report["p"] = p;
  report["m"] = m;
  report["exponents"] = guarded([&] {
    const ExponentSet e = exponents(p, m);
    return json{{"gamma", e.gamma}, {"beta0", e.beta0}, {"beta1", e.beta1}, {"beta2", e.beta2}, {"alpha", e.alpha},
                {"q", e.q}, {"m_threshold", e.m_threshold}, {"degenerate", e.degenerate}};
  });
  report["E0"] = guarded([&] { return json(energy_E0(traj, p, {0.0, t_end})); });
  report["level_set"] = guarded([&] {
    const LevelSetProfile prof(traj, p);
    const double c0 = trajectory_c0(traj);
    json arr = json::array();
    const double top = prof.sup_abs(traj.times.front(), t_end);
    for (double frac : {0.0, 0.25, 0.5, 0.75}) {
      const auto r = prof.energy(frac * top, traj.times.front(), t_end, c0);
      arr.push_back({{"level", r.level}, {"sup_term", r.sup_term}, {"dissipation_term", r.dissipation_term}, {"total", r.total}});
    }
    return arr;
  });
  report["degiorgi"] = guarded([&] {
    const double t = 0.25 * t_end;
    const double c0 = trajectory_c0(traj);
    const double K = minimal_degiorgi_level(traj, t, t_end, p, m, c0);
    if (K == 0.0) return json{{"K", 0.0}, {"note", "h vanishes identically"}};
    const DeGiorgiReport r = degiorgi_iterate(traj, K, t, t_end, p, m, c0);
    const double unit = predict_K(energy_E0(traj, p, {0.0, t_end}), t, t_end, p, m, 1.0);
    std::ostringstream csv;
    csv << "n,level,time,E,E_star\n";
    for (const auto& row : r.rows) csv << row.n << "," << row.level << "," << row.time << "," << row.E << "," << row.E_star << "\n";
    write_text(dest / "degiorgi.csv", csv.str());
    return json{{"t", t}, {"T", t_end}, {"K_minimal", K}, {"Q", r.Q}, {"verdict", r.verdict},
                {"calibrated_C", unit > 0 ? K / unit : 0.0}, {"measured_sup", r.measured_sup}, {"rows", r.rows.size()}};
  });
  report["moment_bounds"] = guarded([&] {
    json arr = json::array();
    std::ostringstream csv;
    csv << "theta,time,norm\n";
    for (double theta : {0.0, 2.0, 4.0}) {
      if (theta > m) continue;
      const auto r = moment_bound_check(traj, m, theta);
      for (std::size_t i = 0; i < r.times.size(); ++i) csv << theta << "," << r.times[i] << "," << r.norms[i] << "\n";
      arr.push_back({{"theta", theta}, {"q", r.q}, {"C3", r.C3}, {"holds", r.holds}});
    }
    write_text(dest / "moments.csv", csv.str());
    return arr;
  });
  report["smoothing_fit"] = guarded([&] {
    const SmoothingFit f = smoothing_fit(traj, p, m);
    return json{{"slope", f.slope}, {"slope_bound", f.slope_bound}, {"slope_ok", f.slope_ok}, {"C", f.C},
                {"samples", f.samples}};
  });
  report["h1_smallness"] = guarded([&] {
    const auto [l2, grad] = h1_smallness(traj, 0.5 * t_end);
    return json{{"time", 0.5 * t_end}, {"h_L2_1", l2}, {"grad_h_L2_2", grad}};
  });
  {
    std::ostringstream csv;
    csv << "time,lp_p,linf_h,grad_energy,entropy\n";
    for (const auto& r : traj.scalars) csv << r.time << "," << r.lp_p << "," << r.linf_h << "," << r.grad_energy << "," << r.entropy << "\n";
    write_text(dest / "energy.csv", csv.str());
  }
  write_text(dest / "report.json", report.dump(2) + "\n");
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_verify(int n, double L, std::ostream& out) {
  bool ok = true;
  for (const auto& c : invariant_suite(n, L)) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

struct SweepOptions {
  std::vector<double> amplitudes{0.1, 0.2, 0.4};
  std::vector<int> ns{32};
  std::vector<double> ps{2.0};
  double m = 12.0, L = 8.0, t_end = 1.0, cfl = 0.5;
  int mode = 1;
  unsigned workers = 0;
  std::string out;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<SimConfig> jobs;
  for (double a : o.amplitudes)
    for (int n : o.ns)
      for (double p : o.ps) {
        SimConfig c;
        c.n = n;
        c.extent = o.L;
        c.t_end = o.t_end;
        c.cfl = o.cfl;
        c.p = p;
        c.m = o.m;
        c.initial = PerturbedMaxwellian{a, o.mode};
        try {
          c.validate();
        } catch (const std::exception& e) {
          err << "error: " << e.what() << "\n";
          return 2;
        }
        jobs.push_back(c);
      }
  const unsigned workers = std::max(1u, o.workers ? o.workers : std::thread::hardware_concurrency());
  std::vector<std::string> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  bool failed = false;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const SimConfig& c = jobs[i];
      char name[96];
      std::snprintf(name, sizeof name, "run_a%g_n%d_p%g", std::get<PerturbedMaxwellian>(c.initial).amplitude, c.n, c.p);
      try {
        const Trajectory traj = run(c);
        write_trajectory(traj, fs::path(o.out) / name);
        const auto& last = traj.scalars.back();
        std::ostringstream row;
        row << name << "," << std::get<PerturbedMaxwellian>(c.initial).amplitude << "," << c.n << "," << c.p << ","
            << last.time << "," << traj.scalars.front().lp_p << "," << last.lp_p << "," << last.linf_h << ","
            << (traj.abort_time ? 1 : 0);
        rows[i] = row.str();
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mutex);
        err << "error in " << name << ": " << e.what() << "\n";
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, jobs.size()); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::ostringstream csv;
  csv << "run,amplitude,n,p,t_final,lp_p_initial,lp_p_final,linf_h_final,aborted\n";
  for (const auto& r : rows) csv << r << "\n";
  fs::create_directories(o.out);
  write_text(fs::path(o.out) / "summary.csv", csv.str());
  out << csv.str();
  return failed ? 1 : 0;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneous Landau-Coulomb simulator and diagnostics"};
  app.require_subcommand(1);

  Paths paths;
  auto* run_cmd = app.add_subcommand("run", "Integrate a configuration and write the trajectory");
  run_cmd->add_option("--config", paths.config, "Config file (key = value)")->required();
  run_cmd->add_option("--out", paths.out, "Output directory")->required();

  Paths dpaths;
  auto* diag = app.add_subcommand("diagnose", "Analysis reports for a stored trajectory");
  diag->add_option("--dir", dpaths.dir, "Trajectory directory")->required();
  diag->add_option("--out", dpaths.out, "Report directory (default <dir>/diagnostics)");

  int vn = 32;
  double vL = 8.0;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--n", vn, "Points per axis");
  verify->add_option("--L", vL, "Half-width of the velocity box");

  SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep", "Run amplitude x n x p concurrently (perturbed Maxwellian)");
  sweep->add_option("--amplitudes", sw.amplitudes)->delimiter(',');
  sweep->add_option("--n", sw.ns)->delimiter(',');
  sweep->add_option("--p", sw.ps)->delimiter(',');
  sweep->add_option("--m", sw.m);
  sweep->add_option("--L", sw.L);
  sweep->add_option("--t-end", sw.t_end);
  sweep->add_option("--cfl", sw.cfl);
  sweep->add_option("--mode", sw.mode);
  sweep->add_option("--workers", sw.workers, "Concurrent runs (default: hardware threads)");
  sweep->add_option("--out", sw.out, "Output directory")->required();

  double ep = 2.0, em = 55.0;
  auto* expo = app.add_subcommand("exponents", "Print the exponent set for (p, m)");
  expo->add_option("--p", ep)->required();
  expo->add_option("--m", em)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*run_cmd) return cmd_run(paths, out, err);
    if (*diag) return cmd_diagnose(dpaths, out, err);
    if (*verify) {
      if (vn < 8 || vn % 2 || !(vL > 0)) {
        err << "usage error: --n must be even and >= 8, --L positive\n";
        return 2;
      }
      return cmd_verify(vn, vL, out);
    }
    if (*sweep) return cmd_sweep(sw, out, err);
    if (*expo) {
      ExponentSet e;
      try {
        e = exponents(ep, em);
      } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
      }
      char buf[512];
      std::snprintf(buf, sizeof buf,
                    "p = %.12g\nm = %.12g\ngamma = %.12g\ngamma_alt = %.12g\nbeta0 = %.12g\nbeta1 = %.12g\nbeta2 = %.12g\n"
                    "alpha = %.12g\nq = %.12g\nm_threshold = %.12g\ndegenerate = %s\ntheorem_admissible = %s\n",
                    e.p, e.m, e.gamma, e.gamma_alt, e.beta0, e.beta1, e.beta2, e.alpha, e.q, e.m_threshold,
                    e.degenerate ? "true" : "false", e.theorem_admissible ? "true" : "false");
      out << buf;
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace landau
