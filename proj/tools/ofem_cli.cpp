//
// Experiment driver: step-projection sweeps, 1D reaction-diffusion adaptive
// runs, 2D transport benchmarks, and SVG rendering of the CSV outputs.
//
// Exit codes: 0 success, 1 compute failure, 2 invalid configuration.
//

#include <CLI11.hpp>

#include <ofem/adapt.hpp>
#include <ofem/experiment.hpp>
#include <ofem/fem1d.hpp>
#include <ofem/mesh1d.hpp>
#include <ofem/stepproj.hpp>
#include <ofem/svgplot.hpp>
#include <ofem/transport2d.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using ofem::csv_num;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_int(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("config key '" + key + "' expects an integer, got '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + s + "'");
  }
}

// Applies key=value config entries to options the command line left unset,
// so flags always win.
class ConfigBinder {
public:
  void bind(const std::string& key, CLI::Option* opt, int& var) {
    entries_[key] = {opt, [&var, key](const std::string& s) { var = parse_int(s, key); }};
  }
  void bind(const std::string& key, CLI::Option* opt, double& var) {
    entries_[key] = {opt, [&var, key](const std::string& s) { var = parse_double(s, key); }};
  }
  void bind(const std::string& key, CLI::Option* opt, std::string& var) {
    entries_[key] = {opt, [&var](const std::string& s) { var = s; }};
  }
  void apply(const std::string& config_path) const {
    if (config_path.empty()) return;
    std::map<std::string, std::string> cfg;
    try {
      cfg = ofem::read_config_file(config_path);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    for (const auto& [k, v] : cfg) {
      const auto it = entries_.find(k);
      if (it == entries_.end()) throw ConfigError("unknown config key: " + k);
      if (it->second.first->count() == 0) it->second.second(v);
    }
  }

private:
  std::map<std::string,
           std::pair<CLI::Option*, std::function<void(const std::string&)>>>
      entries_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::string out_file(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

struct RunTimer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

//------------------------------------------------------------------------------
// proj-sweep
//------------------------------------------------------------------------------

struct ProjSweepOpts {
  std::string space = "p1dg";
  int t_steps = 101;
  double h = 1.0;
  std::string out = ".";
  int seed = 0;
  std::string config;
};

void run_proj_sweep(const ProjSweepOpts& o) {
  require(o.space == "p0" || o.space == "p1dg" || o.space == "s1_uniform" ||
              o.space == "s1_graded",
          "space must be one of p0, p1dg, s1_uniform, s1_graded");
  require(o.t_steps >= 2, "t-steps must be at least 2");
  require(o.h > 0.0, "h must be positive");

  RunTimer timer;
  ofem::CsvWriter csv(out_file(o.out, "proj_sweep_" + o.space + ".csv"),
                      {"t", "h", "space", "U_minus2", "U_minus1", "U_plus1",
                       "U_plus2", "os", "l2_error"});
  auto cell = [](const std::optional<double>& v) {
    return v ? csv_num(*v) : std::string();
  };
  for (int i = 0; i < o.t_steps; ++i) {
    const double t = static_cast<double>(i) / (o.t_steps - 1);
    const ofem::CutInterval cut{t, o.h};
    ofem::ProjectionResult r;
    if (o.space == "p0") r = ofem::closed_p0(cut);
    else if (o.space == "p1dg") r = ofem::closed_p1disc(cut);
    else if (o.space == "s1_uniform") r = ofem::closed_s1_uniform(cut);
    else r = ofem::closed_s1_graded(cut);
    csv.row({csv_num(t), csv_num(o.h), o.space, cell(r.U_minus2), cell(r.U_minus1),
             cell(r.U_plus1), cell(r.U_plus2), csv_num(r.overshoot),
             csv_num(r.l2_error_on_cut)});
  }

  ofem::write_manifest(out_file(o.out, "manifest_proj_sweep.json"),
                       {{"command", "proj-sweep"},
                        {"space", o.space},
                        {"t_steps", csv_num(o.t_steps)},
                        {"h", csv_num(o.h)},
                        {"out", o.out},
                        {"seed", csv_num(o.seed)}},
                       timer.seconds());
}

//------------------------------------------------------------------------------
// rd1d
//------------------------------------------------------------------------------

struct Rd1dOpts {
  std::string case_name = "matched";
  double eps = 1e-16;
  double theta = std::nan("");
  double theta_refine = std::nan("");
  double theta_coarsen = std::nan("");
  int iters = 20;
  double mu = 10.0;
  std::string out = ".";
  int seed = 0;
  std::string config;
};

void run_rd1d(const Rd1dOpts& o) {
  const auto parsed = ofem::parse_rd_case(o.case_name);
  require(parsed.has_value(),
          "case must be one of matched, nonmatched, coarsen, f2");
  require(o.eps > 0.0, "eps must be positive");
  require(o.iters >= 0, "iters must be nonnegative");
  require(o.mu > 0.0, "mu must be positive");

  ofem::MarkParams marking = ofem::rd_default_marking(*parsed);
  if (!std::isnan(o.theta)) marking.theta = o.theta;
  if (!std::isnan(o.theta_refine)) marking.theta_refine = o.theta_refine;
  if (!std::isnan(o.theta_coarsen)) marking.theta_coarsen = o.theta_coarsen;
  require(marking.theta > 0.0 && marking.theta < 1.0, "theta must lie in (0,1)");
  require(marking.theta_coarsen >= 0.0 &&
              marking.theta_coarsen < marking.theta_refine &&
              marking.theta_refine <= 1.0,
          "need 0 <= theta-coarsen < theta-refine <= 1");

  RunTimer timer;
  const ofem::RdRunResult run =
      ofem::run_rd_case(*parsed, o.eps, marking, o.iters, o.mu);

  ofem::CsvWriter csv(out_file(o.out, "rd1d_" + o.case_name + ".csv"),
                      {"iter", "dofs", "eta_total", "overshoot"});
  ofem::CsvWriter detail(
      out_file(o.out, "rd1d_" + o.case_name + "_detail.csv"),
      {"iter", "dofs", "eta_total", "h_min", "os_conforming", "os_dg",
       "os_mixed_u", "min_dg", "min_conforming", "max_conforming"});
  for (const auto& r : run.iterations) {
    csv.row({csv_num(r.iter), csv_num(r.dofs), csv_num(r.eta_total),
             csv_num(r.os_conforming)});
    detail.row({csv_num(r.iter), csv_num(r.dofs), csv_num(r.eta_total),
                csv_num(r.h_min), csv_num(r.os_conforming), csv_num(r.os_dg),
                csv_num(r.os_mixed_u), csv_num(r.min_dg),
                csv_num(r.min_conforming), csv_num(r.max_conforming)});
  }

  const auto& last = run.iterations.back();
  std::cout << "overshoot_conforming=" << csv_num(last.os_conforming) << "\n"
            << "overshoot_dg=" << csv_num(last.os_dg) << "\n"
            << "overshoot_mixed_u=" << csv_num(last.os_mixed_u) << "\n"
            << "min_dg=" << csv_num(last.min_dg) << "\n"
            << "min_conforming=" << csv_num(last.min_conforming) << "\n"
            << "max_conforming=" << csv_num(last.max_conforming) << "\n"
            << "iterations=" << csv_num(last.iter) << "\n"
            << "dofs_final=" << csv_num(last.dofs) << "\n";

  ofem::write_manifest(out_file(o.out, "manifest_rd1d.json"),
                       {{"command", "rd1d"},
                        {"case", o.case_name},
                        {"eps", csv_num(o.eps)},
                        {"theta", csv_num(marking.theta)},
                        {"theta_refine", csv_num(marking.theta_refine)},
                        {"theta_coarsen", csv_num(marking.theta_coarsen)},
                        {"iters", csv_num(o.iters)},
                        {"mu", csv_num(o.mu)},
                        {"out", o.out},
                        {"seed", csv_num(o.seed)}},
                       timer.seconds());
}

//------------------------------------------------------------------------------
// transport2d
//------------------------------------------------------------------------------

struct Transport2dOpts {
  std::string case_name = "strip_pi3";
  int degree = 1;
  int iters = 15;
  double theta = 0.8;
  int dof_cap = 50000;
  std::string out = ".";
  int seed = 0;
  std::string config;
};

void run_transport2d(const Transport2dOpts& o) {
  const auto parsed = ofem::parse_benchmark_case(o.case_name);
  require(parsed.has_value(),
          "case must be one of strip_pi3, half_disk, curved2");
  require(o.degree == 0 || o.degree == 1, "degree must be 0 or 1");
  require(o.iters >= 1, "iters must be at least 1");
  require(o.theta > 0.0 && o.theta < 1.0, "theta must lie in (0,1)");
  require(o.dof_cap >= 1, "dof-cap must be positive");

  RunTimer timer;
  const ofem::Benchmark2DResult run =
      ofem::run_benchmark(*parsed, o.degree, o.iters, o.theta, o.dof_cap);

  const std::string stem =
      "transport2d_" + o.case_name + "_p" + std::to_string(o.degree);
  ofem::CsvWriter csv(out_file(o.out, stem + ".csv"),
                      {"iter", "dofs", "eta_total", "overshoot"});
  for (const auto& r : run.records)
    csv.row({csv_num(r.iter), csv_num(r.dofs), csv_num(r.eta_total),
             csv_num(r.overshoot)});

  const ofem::DgFunction2D& u = run.final_solution;
  ofem::CsvWriter sol(out_file(o.out, stem + "_solution.csv"),
                      {"tri", "c0", "c1", "c2"});
  for (int t = 0; t < u.mesh.n_triangles(); ++t) {
    if (u.k == 0) {
      sol.row({csv_num(t), csv_num(u.coefficients[t]), "", ""});
    } else {
      sol.row({csv_num(t), csv_num(u.coefficients[3 * t]),
               csv_num(u.coefficients[3 * t + 1]),
               csv_num(u.coefficients[3 * t + 2])});
    }
  }

  ofem::CsvWriter proj(out_file(o.out, stem + "_projected.csv"),
                       {"coord", "value"});
  for (const auto& [coord, value] : ofem::projected_samples(u, *parsed))
    proj.row({csv_num(coord), csv_num(value)});

  double os_max = 0.0;
  for (const auto& r : run.records) os_max = std::max(os_max, r.overshoot);
  const auto& last = run.records.back();
  std::cout << "overshoot_final=" << csv_num(last.overshoot) << "\n"
            << "overshoot_max=" << csv_num(os_max) << "\n"
            << "eta_final=" << csv_num(last.eta_total) << "\n"
            << "iterations=" << csv_num(last.iter) << "\n"
            << "dofs_final=" << csv_num(last.dofs) << "\n";

  ofem::write_manifest(out_file(o.out, "manifest_transport2d.json"),
                       {{"command", "transport2d"},
                        {"case", o.case_name},
                        {"degree", csv_num(o.degree)},
                        {"iters", csv_num(o.iters)},
                        {"theta", csv_num(o.theta)},
                        {"dof_cap", csv_num(o.dof_cap)},
                        {"out", o.out},
                        {"seed", csv_num(o.seed)}},
                       timer.seconds());
}

//------------------------------------------------------------------------------
// plot
//------------------------------------------------------------------------------

struct PlotOpts {
  std::string csv;
  std::string kind = "os-vs-t";
  std::string out;
  std::string config;
};

void run_plot(const PlotOpts& o) {
  const auto kind = ofem::parse_plot_kind(o.kind);
  require(kind.has_value(),
          "kind must be one of os-vs-t, os-vs-iter, projected-solution");
  require(!o.csv.empty(), "an input CSV path is required");
  std::string svg = o.out;
  if (svg.empty())
    svg = std::filesystem::path(o.csv).replace_extension(".svg").string();

  RunTimer timer;
  ofem::render_plot(o.csv, *kind, svg);

  const std::string dir = std::filesystem::path(svg).parent_path().string();
  ofem::write_manifest(out_file(dir.empty() ? "." : dir, "manifest_plot.json"),
                       {{"command", "plot"},
                        {"csv", o.csv},
                        {"kind", o.kind},
                        {"svg", svg}},
                       timer.seconds());
}

} // namespace

//------------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"overshoot experiments: step projections, singularly perturbed "
               "reaction-diffusion, and 2D transport"};
  app.require_subcommand(1);

  ProjSweepOpts ps;
  ConfigBinder ps_bind;
  CLI::App* sweep = app.add_subcommand(
      "proj-sweep", "sweep the cut position t and tabulate projection "
                    "coefficients, overshoot, and cut-element L2 error");
  sweep->set_help_flag("--help", "print this help message and exit");
  ps_bind.bind("space",
               sweep->add_option("--space", ps.space,
                                 "family: p0, p1dg, s1_uniform, s1_graded")
                   ->capture_default_str(),
               ps.space);
  ps_bind.bind("t_steps",
               sweep->add_option("--t-steps", ps.t_steps,
                                 "number of uniform t samples in [0,1]")
                   ->capture_default_str(),
               ps.t_steps);
  ps_bind.bind("h",
               sweep->add_option("--h", ps.h, "cut element width")
                   ->capture_default_str(),
               ps.h);
  ps_bind.bind("out",
               sweep->add_option("--out", ps.out, "output directory")
                   ->capture_default_str(),
               ps.out);
  ps_bind.bind("seed",
               sweep->add_option("--seed", ps.seed, "seed recorded in the manifest")
                   ->capture_default_str(),
               ps.seed);
  sweep->add_option("--config", ps.config,
                    "key=value file; command-line flags take precedence");
  sweep->callback([&] {
    ps_bind.apply(ps.config);
    run_proj_sweep(ps);
  });

  Rd1dOpts rd;
  ConfigBinder rd_bind;
  CLI::App* rd1d = app.add_subcommand(
      "rd1d", "adaptive 1D reaction-diffusion run (conforming, interior-penalty, "
              "and mixed discretizations side by side)");
  rd_bind.bind("case",
               rd1d->add_option("--case", rd.case_name,
                                "matched, nonmatched, coarsen, or f2")
                   ->capture_default_str(),
               rd.case_name);
  rd_bind.bind("eps",
               rd1d->add_option("--eps", rd.eps, "diffusion coefficient")
                   ->capture_default_str(),
               rd.eps);
  rd_bind.bind("theta",
               rd1d->add_option("--theta", rd.theta,
                                "maximum-strategy fraction (default: per case)"),
               rd.theta);
  rd_bind.bind("theta_refine",
               rd1d->add_option("--theta-refine", rd.theta_refine,
                                "refine fraction (default: per case)"),
               rd.theta_refine);
  rd_bind.bind("theta_coarsen",
               rd1d->add_option("--theta-coarsen", rd.theta_coarsen,
                                "coarsen fraction (default: per case)"),
               rd.theta_coarsen);
  rd_bind.bind("iters",
               rd1d->add_option("--iters", rd.iters, "adaptive iterations")
                   ->capture_default_str(),
               rd.iters);
  rd_bind.bind("mu",
               rd1d->add_option("--mu", rd.mu, "interior penalty parameter")
                   ->capture_default_str(),
               rd.mu);
  rd_bind.bind("out",
               rd1d->add_option("--out", rd.out, "output directory")
                   ->capture_default_str(),
               rd.out);
  rd_bind.bind("seed",
               rd1d->add_option("--seed", rd.seed, "seed recorded in the manifest")
                   ->capture_default_str(),
               rd.seed);
  rd1d->add_option("--config", rd.config,
                   "key=value file; command-line flags take precedence");
  rd1d->callback([&] {
    rd_bind.apply(rd.config);
    run_rd1d(rd);
  });

  Transport2dOpts tr;
  ConfigBinder tr_bind;
  CLI::App* t2d = app.add_subcommand(
      "transport2d", "adaptive DG run on a 2D linear transport benchmark");
  tr_bind.bind("case",
               t2d->add_option("--case", tr.case_name,
                               "strip_pi3, half_disk, or curved2")
                   ->capture_default_str(),
               tr.case_name);
  tr_bind.bind("degree",
               t2d->add_option("--degree", tr.degree, "polynomial degree, 0 or 1")
                   ->capture_default_str(),
               tr.degree);
  tr_bind.bind("iters",
               t2d->add_option("--iters", tr.iters, "adaptive iterations")
                   ->capture_default_str(),
               tr.iters);
  tr_bind.bind("theta",
               t2d->add_option("--theta", tr.theta, "maximum-strategy fraction")
                   ->capture_default_str(),
               tr.theta);
  tr_bind.bind("dof_cap",
               t2d->add_option("--dof-cap", tr.dof_cap,
                               "stop refining once the next mesh would exceed this")
                   ->capture_default_str(),
               tr.dof_cap);
  tr_bind.bind("out",
               t2d->add_option("--out", tr.out, "output directory")
                   ->capture_default_str(),
               tr.out);
  tr_bind.bind("seed",
               t2d->add_option("--seed", tr.seed, "seed recorded in the manifest")
                   ->capture_default_str(),
               tr.seed);
  t2d->add_option("--config", tr.config,
                  "key=value file; command-line flags take precedence");
  t2d->callback([&] {
    tr_bind.apply(tr.config);
    run_transport2d(tr);
  });

  PlotOpts pl;
  CLI::App* plot = app.add_subcommand("plot", "render a CSV output as a static SVG");
  plot->add_option("csv", pl.csv, "input CSV file")->required();
  plot->add_option("--kind", pl.kind,
                   "os-vs-t, os-vs-iter, or projected-solution")
      ->capture_default_str();
  plot->add_option("--out", pl.out, "output SVG path (default: CSV path with .svg)");
  plot->callback([&] { run_plot(pl); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
