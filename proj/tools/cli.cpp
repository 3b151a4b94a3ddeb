#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "mkepler/sampling.hpp"
#include "serialize.hpp"

namespace mkepler::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

// Early exit with a code and a message for stderr.
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Inline JSON when the argument looks like it, otherwise a file name.
Json payload(const std::string& arg) {
  const auto start = arg.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && (arg[start] == '{' || arg[start] == '[')) return io::parse(arg);
  return io::parse(read_file(arg));
}

fs::path output_path(const std::string& requested, const std::string& format) {
  const char* dir = std::getenv(kOutputDirVariable);
  if (requested.empty()) {
    if (dir == nullptr || *dir == '\0') return {};
    return fs::path(dir) / ("trajectory." + format);
  }
  fs::path p(requested);
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = fs::path(dir) / p;
  return p;
}

// Write to a sibling temporary, then rename over the target.
void write_atomic(const fs::path& target, const std::string& content) {
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Exit{kBadInput, "cannot write " + tmp.string()};
    f << content;
    f.flush();
    if (!f) throw Exit{kBadInput, "cannot write " + tmp.string()};
  }
  fs::rename(tmp, target);
}

void check_dim(int dim) {
  if (dim < 3 || dim % 2 == 0) throw Exit{kBadInput, "--dim must be odd and >= 3"};
}

void check_tolerance(double tol, const char* name) {
  if (!(tol > 0 && tol <= 1e-3)) throw Exit{kBadInput, std::string(name) + " must lie in (0, 1e-3]"};
}

// Analytic circle, or its magnetized analogue with the Lenz vector normal to the plane.
OrbitElements circle_elements(int k, double mu) {
  const int n = 2 * k + 1;
  const double ell = std::max(1.0, 2.0 * std::abs(mu) / std::sqrt(static_cast<double>(k)));
  OrbitElements el{k, Eigen::VectorXd::Zero(n), ell * Multivectord::basis(Metric::euclidean(n), {1, 2})};
  el.A(n - 1) = std::abs(mu) / (std::sqrt(static_cast<double>(k)) * ell);
  return el;
}

struct SimulateConfig {
  int dim = 0;
  double mu = 0;
  bool circle = false;
  std::string elements;
  std::string state;
  double t_end = 0;
  double periods = 10;
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  int samples = 101;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "csv";
  double drift_bound = 1e-8;
  double string_margin = 1e-4;
};

int simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.dim != 0) check_dim(cfg.dim);
  check_tolerance(cfg.rel_tol, "--rel-tol");
  check_tolerance(cfg.abs_tol, "--abs-tol");
  if (cfg.samples < 2) throw Exit{kBadInput, "--samples must be >= 2"};
  if (cfg.t_end < 0) throw Exit{kBadInput, "--t-end must be positive"};
  if (cfg.format != "csv" && cfg.format != "json") throw Exit{kBadInput, "--format must be csv or json"};
  const int sources = int(cfg.circle) + int(!cfg.elements.empty()) + int(!cfg.state.empty());
  if (sources > 1) throw Exit{kBadInput, "--circle, --elements and --state are exclusive"};

  State s0;
  double mu = cfg.mu;
  std::optional<Eigen::MatrixXd> rotation;
  if (!cfg.state.empty()) {
    s0 = io::state_from_json(payload(cfg.state));
    const auto orbit = on_orbit_residual(s0.xi, mu, 1e-9);
    if (!orbit.on_orbit) throw MembershipError("xi_on_orbit", "xi does not lie on the magnetic orbit of --mu");
  } else {
    OrbitElements el;
    if (cfg.circle) {
      if (cfg.dim == 0) throw Exit{kBadInput, "--circle needs --dim"};
      el = circle_elements((cfg.dim - 1) / 2, cfg.mu);
    } else if (!cfg.elements.empty()) {
      el = io::elements_from_json(payload(cfg.elements));
    } else {
      if (cfg.dim == 0) throw Exit{kBadInput, "--dim is required"};
      Rng rng(cfg.seed);
      el = random_bound_elements((cfg.dim - 1) / 2, cfg.mu, rng);
    }
    const InitialData data = construct_initial_data(el);
    s0 = State{data.q, data.v, data.eta};
    mu = data.implied_mu;
    rotation = data.rotation;
  }
  if (cfg.dim != 0 && s0.dim() != cfg.dim) throw Exit{kBadInput, "--dim disagrees with the initial data"};

  Json report{{"command", "simulate"}, {"k", s0.k()}, {"mu", mu}, {"seed", cfg.seed}};
  if (rotation) report["rotation"] = io::to_json(*rotation);
  auto abort = [&](double t, const char* what) {
    report["status"] = "aborted";
    report["t_abort"] = t;
    report["reason"] = what;
    out << report.dump(2) << '\n';
    err << "error: integration aborted at t = " << t << ": " << what << '\n';
    return kIntegrationAbort;
  };

  if (s0.r.norm() == 0.0) return abort(0.0, "initial position is the origin");
  if (!s0.xi.is_zero() && dirac_string_margin(s0.r) < cfg.string_margin)
    return abort(0.0, "initial position too close to the Dirac string");
  const InvariantRecord rec0 = compute_invariants(s0, mu);
  std::optional<OrbitElements> elements;
  if (rec0.Lbar) elements = elements_of(rec0);
  double t_end = cfg.t_end;
  if (t_end == 0) {
    t_end = rec0.E < 0 ? cfg.periods * 2 * std::numbers::pi * std::pow(-2 * rec0.E, -1.5) : 10.0;
  }
  report["t_end"] = t_end;

  IntegrationOptions opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  opt.samples = cfg.samples;
  opt.min_string_margin = cfg.string_margin;

  Trajectory traj;
  try {
    traj = integrate(s0, mu, t_end, opt);
  } catch (const IntegrationError& e) {
    return abort(e.t(), e.what());
  }

  const DriftReport drift = drift_report(traj);
  double conic = 0;
  if (elements)
    for (const auto& smp : traj.samples) {
      const auto res = conic_residuals(smp.state.r, *elements);
      conic = std::max({conic, std::abs(res.scalar), res.wedge});
    }

  const fs::path path = output_path(cfg.output, cfg.format);
  if (!path.empty()) {
    const OrbitElements* el = elements ? &*elements : nullptr;
    if (cfg.format == "json") {
      write_atomic(path, io::trajectory_json(traj, el).dump(1) + "\n");
    } else {
      std::ostringstream csv;
      io::write_trajectory_csv(csv, traj, el);
      write_atomic(path, csv.str());
    }
  }

  const bool ok = drift.max() <= cfg.drift_bound;
  report["status"] = ok ? "ok" : "drift_exceeded";
  report["drift"] = io::to_json(drift);
  report["drift_bound"] = cfg.drift_bound;
  report["max_conic_residual"] = elements ? Json(conic) : Json(nullptr);
  report["perihelia"] = traj.perihelion_times.size();
  report["steps"] = {{"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected}};
  report["output"] = path.empty() ? Json(nullptr) : Json(path.string());
  out << report.dump(2) << '\n';
  if (!ok) {
    err << "error: drift " << drift.max() << " exceeds the bound " << cfg.drift_bound << '\n';
    return kBoundExceeded;
  }
  return kOk;
}

struct LemmaConfig {
  int dim = 0;
  double mu = 0;
  int samples = 1000;
  std::uint64_t seed = 0;
  double margin = 0.1;
  double bound = 1e-10;
};

int check_lemma(const LemmaConfig& cfg, std::ostream& out, std::ostream& err) {
  check_dim(cfg.dim);
  if (cfg.samples < 1) throw Exit{kBadInput, "--samples must be >= 1"};
  if (!(cfg.margin > 0 && cfg.margin < 2)) throw Exit{kBadInput, "--margin must lie in (0, 2)"};
  const int k = (cfg.dim - 1) / 2;
  Rng rng(cfg.seed);
  LemmaResiduals worst;
  std::vector<double> orders;
  double covariant = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    const Eigen::VectorXd r = random_point(cfg.dim, cfg.margin, rng);
    const SkewMatrixd xi = random_charge(cfg.mu, k, rng);
    const Eigen::VectorXd v = random_gaussian(cfg.dim, rng);
    const LemmaResiduals res = lemma_residuals(r, xi, v, cfg.mu, 1e-3);
    const double fine = covariant_derivative_residual(r, 1e-4, kResolvedConvention.commutator_sign());
    orders.push_back(std::log10(res.covariant / fine));
    covariant = std::max(covariant, fine);
    worst.radial_potential = std::max(worst.radial_potential, res.radial_potential);
    worst.radial_curvature = std::max(worst.radial_curvature, res.radial_curvature);
    worst.quadratic = std::max(worst.quadratic, res.quadratic);
    worst.paired_norm = std::max(worst.paired_norm, res.paired_norm);
    worst.force_norm = std::max(worst.force_norm, res.force_norm);
  }
  std::sort(orders.begin(), orders.end());
  const double order = orders[orders.size() / 2];
  const bool ok = worst.max_algebraic() <= cfg.bound && std::abs(order - 2.0) <= 0.2;
  Json report{{"command", "check-lemma"},
              {"k", k},
              {"mu", cfg.mu},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"residuals",
               {{"radial_potential", worst.radial_potential},
                {"radial_curvature", worst.radial_curvature},
                {"quadratic", worst.quadratic},
                {"paired_norm", worst.paired_norm},
                {"force_norm", worst.force_norm}}},
              {"max_algebraic", worst.max_algebraic()},
              {"covariant_residual_h1e-4", covariant},
              {"covariant_order", order},
              {"status", ok ? "ok" : "bound_exceeded"}};
  out << report.dump(2) << '\n';
  if (!ok) {
    err << "error: lemma residuals exceed the bound\n";
    return kBoundExceeded;
  }
  return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnetized Kepler problems in odd dimensions", "mkepler"};
  app.require_subcommand(1);

  SimulateConfig sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a trajectory and report conservation drift");
  simulate_cmd->add_option("--dim", sim.dim, "Ambient dimension 2k+1");
  simulate_cmd->add_option("--mu", sim.mu, "Magnetic charge (ignored with --elements)");
  simulate_cmd->add_flag("--circle", sim.circle, "Start on the circular benchmark orbit");
  simulate_cmd->add_option("--elements", sim.elements, "Orbit elements JSON (file or inline)");
  simulate_cmd->add_option("--state", sim.state, "Initial state JSON (file or inline)");
  simulate_cmd->add_option("--t-end", sim.t_end, "End time (default: 10 radial periods for bound orbits)");
  simulate_cmd->add_option("--periods", sim.periods, "Radial periods when --t-end is not given");
  simulate_cmd->add_option("--rel-tol", sim.rel_tol, "Relative tolerance");
  simulate_cmd->add_option("--abs-tol", sim.abs_tol, "Absolute tolerance");
  simulate_cmd->add_option("--samples", sim.samples, "Number of output samples");
  simulate_cmd->add_option("--seed", sim.seed, "Seed for the random bound orbit");
  simulate_cmd->add_option("--output", sim.output, "Trajectory file");
  simulate_cmd->add_option("--format", sim.format, "csv or json");
  simulate_cmd->add_option("--drift-bound", sim.drift_bound, "Largest accepted relative drift");
  simulate_cmd->add_option("--string-margin", sim.string_margin, "Abort below this Dirac string margin");

  std::string input;
  auto* construct_cmd = app.add_subcommand("construct", "Initial data for orbit elements");
  construct_cmd->add_option("elements,--elements", input, "Orbit elements JSON")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Conic class, energy, eccentricity and charge");
  classify_cmd->add_option("elements,--elements", input, "Orbit elements JSON")->required();

  bool invert = false;
  auto* lightcone_cmd = app.add_subcommand("lightcone", "Map orbit elements to the light-cone form");
  lightcone_cmd->add_option("input,--input", input, "Orbit elements JSON, or light-cone JSON with --invert")
      ->required();
  lightcone_cmd->add_flag("--invert", invert, "Map light-cone data back to orbit elements");

  std::string transform;
  double lambda = 1.0;
  auto* act_cmd = app.add_subcommand("act", "Apply (Lambda, lambda) to light-cone data");
  act_cmd->add_option("lightcone,--lightcone", input, "Light-cone JSON")->required();
  act_cmd->add_option("--transform", transform, "Lorentz transform JSON")->required();
  act_cmd->add_option("--lambda", lambda, "Positive scale factor");

  LemmaConfig lemma;
  auto* lemma_cmd = app.add_subcommand("check-lemma", "Monopole identities at seeded random points");
  lemma_cmd->add_option("--dim", lemma.dim, "Ambient dimension 2k+1")->required();
  lemma_cmd->add_option("--mu", lemma.mu, "Magnetic charge");
  lemma_cmd->add_option("--samples", lemma.samples, "Number of random points");
  lemma_cmd->add_option("--seed", lemma.seed, "Random seed");
  lemma_cmd->add_option("--margin", lemma.margin, "Minimum Dirac string margin of the points");
  lemma_cmd->add_option("--bound", lemma.bound, "Largest accepted algebraic residual");

  auto* fit_cmd = app.add_subcommand("fit", "Least-squares conic through trajectory positions");
  fit_cmd->add_option("trajectory,--trajectory", input, "Trajectory file (csv or json)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  if (simulate_cmd->parsed()) return simulate(sim, out, err);
  if (lemma_cmd->parsed()) return check_lemma(lemma, out, err);

  Json result;
  if (construct_cmd->parsed()) {
    result = io::to_json(construct_initial_data(io::elements_from_json(payload(input))));
  } else if (classify_cmd->parsed()) {
    const OrbitElements el = io::elements_from_json(payload(input));
    validate(el);
    result = Json{{"class", to_string(classify(el))},
                  {"E", energy_from_elements(el)},
                  {"e", eccentricity(el)},
                  {"mu", implied_magnetic_charge(el)}};
  } else if (lightcone_cmd->parsed()) {
    if (invert)
      result = io::to_json(from_lightcone(io::lightcone_from_json(payload(input))));
    else
      result = io::to_json(to_lightcone(io::elements_from_json(payload(input))));
  } else if (act_cmd->parsed()) {
    const LightConeOrbit lc = io::lightcone_from_json(payload(input));
    const LorentzTransform t = io::transform_from_json(payload(transform));
    result = io::to_json(group_apply(t, lambda, lc));
  } else if (fit_cmd->parsed()) {
    const auto points = io::read_trajectory_positions(read_file(input));
    result = io::to_json(conic_fit(points));
  }
  out << result.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Exit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const MembershipError& e) {
    err << "error: membership violation (" << e.invariant() << "): " << e.what() << '\n';
    return kMembership;
  } catch (const IntegrationError& e) {
    err << "error: integration aborted at t = " << e.t() << ": " << e.what() << '\n';
    return kIntegrationAbort;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mkepler::cli
