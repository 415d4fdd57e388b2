// oscdecay: command-line front end for the oscillatory-decay laboratory.
//
// Subcommands: ml, newton, integrate, sweep, sublevel, morse, report.
// A flat `key = value` config file (--config) supplies defaults; command-line
// flags override.  Every CSV output embeds the resolved configuration as
// `# key = value` header lines, and `report` re-reads such a file and
// reproduces its verdict bit-identically.
//
// Exit codes: 0 pass, 1 verdict fail / tolerance not met, 2 usage or config
// error, 3 analysis refused (unbounded principal face / phase not normalized).

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "oscml/decay.hpp"
#include "oscml/newton.hpp"
#include "oscml/report.hpp"

using namespace oscml;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat `key = value` file; '#' starts a comment.
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// The config path must be known before options are declared (their defaults
// come from it), so scan argv directly.
std::map<std::string, std::string> preload_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") return load_config_file(argv[i + 1]);
  return {};
}

struct Defaults {
  const std::map<std::string, std::string>& kv;

  std::string str(const std::string& key, std::string dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }
  double num(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "' is not a number: " + it->second);
    }
  }
  int integer(const std::string& key, int dflt) const {
    double v = num(key, dflt);
    if (v != static_cast<long>(v)) throw UsageError("config key '" + key + "' is not an integer");
    return static_cast<int>(v);
  }
};

// "a", "ai", "a+bi", "-1.5-2e3i" ...
Complex parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw UsageError("empty complex literal");
  const char* p = s.c_str();
  char* end = nullptr;
  double first = std::strtod(p, &end);
  if (end == p) throw UsageError("bad complex literal: " + s);
  if (*end == '\0') return {first, 0.0};
  if (*end == 'i' && end[1] == '\0') return {0.0, first};
  const char* q = end;
  double second = std::strtod(q, &end);
  if (end == q || *end != 'i' || end[1] != '\0')
    throw UsageError("bad complex literal: " + s);
  return {first, second};
}

// "bump:SIGMA", "indicator:RADIUS", or "poly:EXPRESSION".
Amplitude parse_amplitude(const std::string& text) {
  std::size_t colon = text.find(':');
  std::string kind = trim(colon == std::string::npos ? text : text.substr(0, colon));
  std::string arg = colon == std::string::npos ? "" : trim(text.substr(colon + 1));
  if (kind == "bump") return Amplitude::bump_of(arg.empty() ? 0.5 : std::stod(arg));
  if (kind == "indicator") return Amplitude::indicator_of(arg.empty() ? 1.0 : std::stod(arg));
  if (kind == "poly") {
    if (arg.empty()) throw UsageError("poly amplitude needs an expression");
    return Amplitude::polynomial_of(parse_phase(arg));
  }
  throw UsageError("unknown amplitude '" + text + "' (want bump:s, indicator:r, poly:expr)");
}

void apply_threads(int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("OSC_DECAY_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open output file: " + path);
  out << text;
}

int verdict_exit(const Verdict& v) { return v.pass ? 0 : 1; }

// ---- shared option bundles ------------------------------------------------

struct QuadOpts {
  double rel_tol;
  double rho;
  long max_cells;
  int threads;

  void attach(CLI::App* cmd, const Defaults& d, double tol_dflt) {
    rel_tol = d.num("rel_tol", tol_dflt);
    rho = d.num("rho", 1.0);
    max_cells = static_cast<long>(d.num("max_cells", 10000000));
    threads = d.integer("threads", 0);
    cmd->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    cmd->add_option("--rho", rho, "half-width of the working square");
    cmd->add_option("--max-cells", max_cells, "quadrature cell budget");
    cmd->add_option("--threads", threads, "worker thread cap (0 = library default)");
  }
  QuadConfig config() const {
    QuadConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.rho = rho;
    cfg.max_cells = max_cells;
    return cfg;
  }
  void echo(std::map<std::string, std::string>& m) const {
    m["rel_tol"] = fmt17(rel_tol);
    m["rho"] = fmt17(rho);
    m["max_cells"] = std::to_string(max_cells);
    m["threads"] = std::to_string(threads);
  }
};

struct NewtonSummary {
  Rational h;
  int m = 0;
};

// h and m in the given coordinates; refuses when theorem analysis is
// unavailable (unbounded principal face propagates as an exception).
NewtonSummary newton_summary(const PolynomialPhase& f, bool adapted) {
  NewtonInvariants inv = analyze(f, adapted);
  if (inv.principal_unbounded || !inv.multiplicity_m) throw UnboundedPrincipalFace();
  return {inv.distance_d, *inv.multiplicity_m};
}

// ---- subcommands ----------------------------------------------------------

int cmd_ml(double alpha, double beta, const std::string& ztext, double tol, bool bound_ratio) {
  MLParams p{alpha, beta};
  p.validate();
  Complex z = parse_complex(ztext);
  Complex v = ml_eval(p, z, tol);
  std::cout << "E(" << fmt17(z.real()) << (z.imag() < 0 ? " - " : " + ")
            << fmt17(std::abs(z.imag())) << "i) = " << fmt17(v.real())
            << (v.imag() < 0 ? " - " : " + ") << fmt17(std::abs(v.imag())) << "i\n";
  if (bound_ratio) {
    if (z.real() != 0.0) throw UsageError("--bound-ratio needs a purely imaginary z = ti");
    std::cout << "bound_ratio = " << fmt17(ml_bound_ratio(p, z.imag())) << "\n";
  }
  return 0;
}

int cmd_newton(const std::string& phase_text, bool adapted) {
  PolynomialPhase f = parse_phase(phase_text);
  NewtonInvariants inv = analyze(f, adapted);
  std::cout << "phase            " << print_phase(f) << "\n";
  std::cout << "distance d       " << rat_str(inv.distance_d) << "\n";
  std::cout << "principal face   "
            << (inv.principal_unbounded ? std::string("unbounded") : inv.principal_face.str())
            << "\n";
  if (!inv.principal_unbounded)
    std::cout << "principal part   " << print_phase(inv.principal_part) << "\n";
  if (inv.nu) std::cout << "nu               " << *inv.nu << "\n";
  if (inv.multiplicity_m) std::cout << "m                " << *inv.multiplicity_m << "\n";
  std::cout << "height (coords)  " << rat_str(inv.height_in_coords) << "\n";
  std::cout << "adapted declared " << (adapted ? "yes" : "no")
            << (inv.m_provisional ? " (m provisional)" : "") << "\n";
  // one CSV row: phase, d, nu, m, principal_face, adapted_declared
  std::cout << "csv: " << print_phase(f) << "," << rat_str(inv.distance_d) << ","
            << (inv.nu ? std::to_string(*inv.nu) : "NA") << ","
            << (inv.multiplicity_m ? std::to_string(*inv.multiplicity_m) : "NA") << ","
            << (inv.principal_unbounded ? std::string("unbounded") : inv.principal_face.str())
            << "," << (adapted ? 1 : 0) << "\n";
  if (inv.principal_unbounded) return 3;
  return 0;
}

int cmd_integrate(const std::string& phase_text, const std::string& amp_text,
                  const std::string& kernel, double alpha, double beta, double lambda,
                  double threshold_M, const QuadOpts& qo, const std::string& output) {
  PolynomialPhase f = parse_phase(phase_text);
  Amplitude psi = parse_amplitude(amp_text);
  apply_threads(qo.threads);
  QuadConfig cfg = qo.config();
  QuadratureResult r;
  if (kernel == "ml")
    r = integrate_ml(f, psi, {alpha, beta}, lambda, cfg);
  else if (kernel == "classical")
    r = integrate_classical(f, psi, lambda, cfg);
  else if (kernel == "envelope")
    r = integrate_envelope(f, psi, lambda, cfg, threshold_M);
  else
    throw UsageError("kernel must be ml, classical, or envelope");

  CsvDocument doc;
  doc.config["phase"] = print_phase(f);
  doc.config["amplitude"] = amp_text;
  doc.config["kernel"] = kernel;
  if (kernel == "ml") {
    doc.config["alpha"] = fmt17(alpha);
    doc.config["beta"] = fmt17(beta);
  }
  if (kernel == "envelope") doc.config["threshold_M"] = fmt17(threshold_M);
  qo.echo(doc.config);
  doc.config["tolerance_met"] = r.tolerance_met ? "1" : "0";
  doc.columns = {"lambda", "re", "im", "abs", "error_estimate", "cells"};
  doc.rows.push_back({r.lambda, r.value.real(), r.value.imag(), std::abs(r.value),
                      r.abs_error_estimate, static_cast<double>(r.cells_used)});
  write_output(doc.str(), output);
  return r.tolerance_met ? 0 : 1;
}

int cmd_sweep(const std::string& phase_text, const std::string& amp_text, double alpha,
              double beta, double lambda_min, double lambda_max, int points, bool adapted,
              const QuadOpts& qo, const std::string& output) {
  if (lambda_min < 2.0) throw UsageError("lambda_min must be >= 2");
  if (lambda_max < lambda_min) throw UsageError("lambda_max must be >= lambda_min");
  if (points < 1) throw UsageError("lambda_points must be >= 1");
  PolynomialPhase f = parse_phase(phase_text);
  Amplitude psi = parse_amplitude(amp_text);
  NewtonSummary ns = newton_summary(f, adapted);
  apply_threads(qo.threads);

  DecayReport rep = lambda_sweep(f, psi, {alpha, beta}, geometric_grid(lambda_min, lambda_max, points),
                                 qo.config(), ns.h, ns.m);
  std::map<std::string, std::string> echo;
  echo["phase"] = print_phase(f);
  echo["amplitude"] = amp_text;
  echo["alpha"] = fmt17(alpha);
  echo["beta"] = fmt17(beta);
  echo["lambda_min"] = fmt17(lambda_min);
  echo["lambda_max"] = fmt17(lambda_max);
  echo["lambda_points"] = std::to_string(points);
  echo["adapted_declared"] = adapted ? "1" : "0";
  qo.echo(echo);
  CsvDocument doc = sweep_csv(rep, echo);
  write_output(doc.str(), output);
  // The verdict is recomputed from the CSV itself so that `report` on the
  // written file reproduces it bit-identically.
  Verdict v = verdict_from_sweep_csv(doc);
  std::cout << v.str();
  if (rep.excluded > 0) return 1;
  return verdict_exit(v);
}

int cmd_sublevel(const std::string& phase_text, double eps_min, double eps_max, int points,
                 int depth, bool adapted, const QuadOpts& qo, const std::string& output) {
  if (!(eps_min > 0.0) || eps_max < eps_min) throw UsageError("need 0 < eps_min <= eps_max");
  if (points < 1) throw UsageError("eps_points must be >= 1");
  PolynomialPhase f = parse_phase(phase_text);
  NewtonSummary ns = newton_summary(f, adapted);
  Rational delta = 1 / ns.h;
  apply_threads(qo.threads);

  std::vector<double> grid;
  for (double x : geometric_grid(1.0 / eps_max, 1.0 / eps_min, points)) grid.push_back(1.0 / x);
  SublevelReport rep = epsilon_sweep(f, grid, qo.rho, depth, ExecMode::openmp, delta, ns.m);
  std::map<std::string, std::string> echo;
  echo["phase"] = print_phase(f);
  echo["eps_min"] = fmt17(eps_min);
  echo["eps_max"] = fmt17(eps_max);
  echo["eps_points"] = std::to_string(points);
  echo["depth"] = std::to_string(depth);
  echo["delta"] = rat_str(delta);
  echo["m"] = std::to_string(ns.m);
  qo.echo(echo);
  CsvDocument doc = sublevel_csv(rep, echo);
  write_output(doc.str(), output);
  Verdict v = verdict_from_sublevel_csv(doc);
  std::cout << v.str();
  return verdict_exit(v);
}

int cmd_morse(const std::string& sign, double lambda_min, double lambda_max, int points,
              double M, const QuadOpts& qo) {
  if (sign != "+" && sign != "-") throw UsageError("--sign must be + or -");
  if (lambda_min < 2.0) throw UsageError("lambda_min must be >= 2");
  apply_threads(qo.threads);
  MorseReport rep =
      morse_case_check(sign[0], geometric_grid(lambda_min, lambda_max, points), qo.config(), M);
  std::cout << "lambda,near_measure,near_ratio,far_envelope,far_ratio\n";
  for (const auto& s : rep.samples)
    std::cout << fmt17(s.lambda) << "," << fmt17(s.near_measure) << "," << fmt17(s.near_ratio)
              << "," << fmt17(s.far_envelope) << "," << fmt17(s.far_ratio) << "\n";
  std::cout << rep.verdict.str();
  return verdict_exit(rep.verdict);
}

int cmd_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open CSV file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  CsvDocument doc = parse_csv(buf.str());
  Verdict v;
  if (doc.columns == std::vector<std::string>{"lambda", "abs_value", "error_estimate", "ratio"})
    v = verdict_from_sweep_csv(doc);
  else if (doc.columns == std::vector<std::string>{"epsilon", "measure", "measure_error"})
    v = verdict_from_sublevel_csv(doc);
  else
    throw UsageError("unrecognized CSV schema in " + path);
  std::cout << v.str();
  return verdict_exit(v);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    std::map<std::string, std::string> file_cfg = preload_config(argc, argv);
    Defaults d{file_cfg};

    CLI::App app{"numerical laboratory for oscillatory integrals with Mittag-Leffler kernels"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file");

    // ml
    auto* ml = app.add_subcommand("ml", "evaluate E_{alpha,beta}(z)");
    double ml_alpha = d.num("alpha", 1.0), ml_beta = d.num("beta", 1.0);
    double ml_tol = d.num("tol", 1e-12);
    std::string ml_z = d.str("z", "0");
    bool ml_ratio = false;
    ml->add_option("--alpha", ml_alpha);
    ml->add_option("--beta", ml_beta);
    ml->add_option("--z", ml_z, "complex argument, e.g. 1+2i");
    ml->add_option("--tol", ml_tol);
    ml->add_flag("--bound-ratio", ml_ratio, "also print |E(it)| (1+|t|)");
    ml->add_option("--config", config_path);

    // newton
    auto* nw = app.add_subcommand("newton", "Newton polyhedron invariants");
    std::string nw_phase = d.str("phase", "");
    bool nw_adapted = file_cfg.count("adapted") && file_cfg.at("adapted") == "1";
    nw->add_option("phase", nw_phase, "polynomial phase")->required(d.str("phase", "").empty());
    nw->add_flag("--adapted", nw_adapted, "declare the coordinates adapted");
    nw->add_option("--config", config_path);

    // integrate
    auto* ig = app.add_subcommand("integrate", "one oscillatory/envelope integral");
    std::string ig_phase = d.str("phase", ""), ig_amp = d.str("amplitude", "bump:0.5");
    std::string ig_kernel = d.str("kernel", "ml"), ig_out = d.str("output", "");
    double ig_alpha = d.num("alpha", 0.5), ig_beta = d.num("beta", 1.0);
    double ig_lambda = d.num("lambda", 100.0), ig_M = d.num("threshold_M", 0.0);
    QuadOpts ig_qo;
    ig->add_option("--phase", ig_phase)->required(d.str("phase", "").empty());
    ig->add_option("--amplitude", ig_amp);
    ig->add_option("--kernel", ig_kernel, "ml | classical | envelope");
    ig->add_option("--alpha", ig_alpha);
    ig->add_option("--beta", ig_beta);
    ig->add_option("--lambda", ig_lambda);
    ig->add_option("--threshold-M", ig_M, "restrict envelope to lambda |f| >= M");
    ig->add_option("--output", ig_out, "CSV path (default stdout)");
    ig_qo.attach(ig, d, 1e-6);
    ig->add_option("--config", config_path);

    // sweep
    auto* sw = app.add_subcommand("sweep", "lambda sweep + theorem-1 verdict");
    std::string sw_phase = d.str("phase", ""), sw_amp = d.str("amplitude", "bump:0.5");
    std::string sw_out = d.str("output", "");
    double sw_alpha = d.num("alpha", 0.5), sw_beta = d.num("beta", 1.0);
    double sw_lmin = d.num("lambda_min", 4.0), sw_lmax = d.num("lambda_max", 16384.0);
    int sw_pts = d.integer("lambda_points", 12);
    bool sw_adapted = file_cfg.count("adapted") && file_cfg.at("adapted") == "1";
    QuadOpts sw_qo;
    sw->add_option("--phase", sw_phase)->required(d.str("phase", "").empty());
    sw->add_option("--amplitude", sw_amp);
    sw->add_option("--alpha", sw_alpha);
    sw->add_option("--beta", sw_beta);
    sw->add_option("--lambda-min", sw_lmin);
    sw->add_option("--lambda-max", sw_lmax);
    sw->add_option("--points", sw_pts);
    sw->add_flag("--adapted", sw_adapted);
    sw->add_option("--output", sw_out);
    sw_qo.attach(sw, d, 1e-3);
    sw->add_option("--config", config_path);

    // sublevel
    auto* sl = app.add_subcommand("sublevel", "epsilon sweep of |{|f| <= eps}|");
    std::string sl_phase = d.str("phase", ""), sl_out = d.str("output", "");
    double sl_emin = d.num("eps_min", 1e-6), sl_emax = d.num("eps_max", 1e-1);
    int sl_pts = d.integer("eps_points", 12), sl_depth = d.integer("depth", 12);
    bool sl_adapted = file_cfg.count("adapted") && file_cfg.at("adapted") == "1";
    QuadOpts sl_qo;
    sl->add_option("--phase", sl_phase)->required(d.str("phase", "").empty());
    sl->add_option("--eps-min", sl_emin);
    sl->add_option("--eps-max", sl_emax);
    sl->add_option("--points", sl_pts);
    sl->add_option("--depth", sl_depth, "bisection depth");
    sl->add_flag("--adapted", sl_adapted);
    sl->add_option("--output", sl_out);
    sl_qo.attach(sl, d, 1e-3);
    sl->add_option("--config", config_path);

    // morse
    auto* mo = app.add_subcommand("morse", "Morse model check for x^2 +- y^2");
    std::string mo_sign = d.str("sign", "+");
    double mo_lmin = d.num("lambda_min", 32.0), mo_lmax = d.num("lambda_max", 2048.0);
    double mo_M = d.num("M", 1.0);
    int mo_pts = d.integer("lambda_points", 7);
    QuadOpts mo_qo;
    mo->add_option("--sign", mo_sign, "+ or -");
    mo->add_option("--lambda-min", mo_lmin);
    mo->add_option("--lambda-max", mo_lmax);
    mo->add_option("--points", mo_pts);
    mo->add_option("--M", mo_M, "split threshold (default 1)");
    mo_qo.attach(mo, d, 1e-4);
    mo->add_option("--config", config_path);

    // report
    auto* rp = app.add_subcommand("report", "recompute a verdict from a CSV file");
    std::string rp_path;
    rp->add_option("csv", rp_path, "CSV written by sweep/sublevel")->required();

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }

    if (ml->parsed()) return cmd_ml(ml_alpha, ml_beta, ml_z, ml_tol, ml_ratio);
    if (nw->parsed()) return cmd_newton(nw_phase, nw_adapted);
    if (ig->parsed())
      return cmd_integrate(ig_phase, ig_amp, ig_kernel, ig_alpha, ig_beta, ig_lambda, ig_M,
                           ig_qo, ig_out);
    if (sw->parsed())
      return cmd_sweep(sw_phase, sw_amp, sw_alpha, sw_beta, sw_lmin, sw_lmax, sw_pts,
                       sw_adapted, sw_qo, sw_out);
    if (sl->parsed())
      return cmd_sublevel(sl_phase, sl_emin, sl_emax, sl_pts, sl_depth, sl_adapted, sl_qo,
                          sl_out);
    if (mo->parsed()) return cmd_morse(mo_sign, mo_lmin, mo_lmax, mo_pts, mo_M, mo_qo);
    if (rp->parsed()) return cmd_report(rp_path);
    return 2;
  } catch (const UnboundedPrincipalFace& e) {
    std::cerr << "analysis refused: " << e.what() << "\n";
    return 3;
  } catch (const NotNormalized& e) {
    std::cerr << "analysis refused: " << e.what() << "\n";
    return 3;
  } catch (const PhaseParseError& e) {
    std::cerr << "phase error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
