#include "bounce/document.hpp"
#include "bounce/plot.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace bounce;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

struct Options {
  std::string g, delta;
  long long w_scale = 1;
  std::string map = "gs";
  std::string mode = "exact";
  long long steps = 0;
  bool steps_given = false;
  double tol = kDefaultGapTolerance;
  bool tol_given = false;
  std::string in, out, trajectory, sweep;
  std::string t0, v0;
};

Mode parse_mode(const std::string& mode) {
  if (mode == "exact") return Mode::exact;
  if (mode == "float") return Mode::floating;
  throw ParseError("mode must be 'exact' or 'float'");
}

MapKind parse_map(const std::string& map) {
  if (map == "gs") return MapKind::gs;
  if (map == "pf") return MapKind::pf;
  throw ParseError("map must be 'gs' or 'pf'");
}

Parameters parameters_from(const Options& opt) {
  if (opt.g.empty() || opt.delta.empty())
    throw ParseError("construct requires --g and --delta");
  Parameters params;
  params.g = parse_scalar(opt.g, Mode::exact);
  params.delta = parse_scalar(opt.delta, Mode::exact);
  params.w_scale = opt.w_scale;
  return params;
}

void write_meta(const std::string& out_path, int argc, char** argv) {
  // Provenance lives beside the document so the payload stays byte-stable.
  std::ostringstream cmd;
  for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
  const std::time_t now = std::time(nullptr);
  char stamp[32] = "unknown";
  if (std::tm tm{}; gmtime_r(&now, &tm) != nullptr)
    std::strftime(stamp, sizeof stamp, "%FT%TZ", &tm);
  std::ofstream meta(out_path + ".meta.json", std::ios::binary);
  meta << "{\n  \"command\": \"" << cmd.str() << "\",\n  \"created\": \"" << stamp
       << "\"\n}\n";
}

void print_summary(const ProfileDocument& doc, std::ostream& os) {
  const std::vector<Scalar> times = document_times(doc);
  const PhaseState init = document_initial_state(doc);
  os << "N = " << doc.N << "\n"
     << "V = " << doc.V << "\n"
     << "W = " << to_string(doc.W) << "\n"
     << "eta = " << to_string(doc.eta) << "\n"
     << "t1 = " << to_string(times[1]) << "\n"
     << "initial condition (t0*, v0*) = (" << to_string(init.t) << ", " << to_string(init.v)
     << ")\n";
}

int run_sweep(const Options& opt, int argc, char** argv) {
  std::ifstream in(opt.sweep);
  if (!in) throw ParseError("cannot open sweep file " + opt.sweep);
  if (opt.out.empty()) throw ParseError("--sweep requires --out DIR");
  std::filesystem::create_directories(opt.out);

  struct Case {
    Parameters params;
    std::string line;
  };
  std::vector<Case> cases;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string g, delta, wscale;
    if (!(row >> g >> delta)) continue;
    Case c;
    c.params.g = parse_scalar(g, Mode::exact);
    c.params.delta = parse_scalar(delta, Mode::exact);
    if (row >> wscale) {
      const Scalar parsed = parse_scalar(wscale, Mode::exact);
      if (!is_integer(parsed) || parsed < 1 || parsed > 1'000'000'000)
        throw ParseError("sweep w_scale must be a small positive integer: " + wscale);
      c.params.w_scale = to_integer(parsed).convert_to<long long>();
    }
    c.line = g + " " + delta;
    cases.push_back(std::move(c));
  }
  if (cases.empty()) throw ParseError("sweep file lists no parameter pairs");

  struct Outcome {
    bool pass = false;
    std::string text;
  };
  std::vector<std::future<Outcome>> futures;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i]() -> Outcome {
      Outcome result;
      std::ostringstream os;
      try {
        const Instance inst = construct(cases[i].params);
        const ProfileDocument doc = make_document(inst);
        const CheckReport report = verify_document(doc);
        char name[32];
        std::snprintf(name, sizeof name, "case_%03zu.json", i);
        const std::string path = (std::filesystem::path(opt.out) / name).string();
        write_document(doc, path);
        result.pass = report.all_passed();
        os << "case " << i << " (" << cases[i].line << "): N=" << doc.N
           << " W=" << to_string(doc.W) << " -> " << (result.pass ? "PASS" : "FAIL") << " ["
           << path << "]";
      } catch (const Error& e) {
        result.pass = false;
        os << "case " << i << " (" << cases[i].line << "): ERROR " << e.what();
      }
      result.text = os.str();
      return result;
    }));
  }

  bool all = true;
  for (auto& f : futures) {
    const Outcome outcome = f.get();
    std::cout << outcome.text << "\n";
    all = all && outcome.pass;
  }
  (void)argc;
  (void)argv;
  return all ? kExitPass : kExitCheckFailure;
}

int run_construct(const Options& opt, int argc, char** argv) {
  if (!opt.sweep.empty()) return run_sweep(opt, argc, argv);

  const Instance inst = construct(parameters_from(opt));
  const ProfileDocument doc = make_document(inst);
  print_summary(doc, std::cerr);
  if (opt.out.empty()) {
    std::cout << serialize_document(doc);
  } else {
    write_document(doc, opt.out);
    write_meta(opt.out, argc, argv);
    std::cerr << "profile written to " << opt.out << "\n";
  }
  return kExitPass;
}

int run_simulate(const Options& opt) {
  if (opt.in.empty()) throw ParseError("simulate requires --in PROFILE");
  const Mode mode = parse_mode(opt.mode);
  const MapKind kind = parse_map(opt.map);
  if (opt.t0.empty() != opt.v0.empty())
    throw ParseError("--t0 and --v0 must be given together");
  const ProfileDocument doc = read_document(opt.in);

  PhaseState initial = document_initial_state(doc);
  if (!opt.t0.empty())
    initial = {parse_scalar(opt.t0, mode), parse_scalar(opt.v0, mode)};
  else if (mode == Mode::floating)
    initial = to_float(initial);

  const PlateProfile profile =
      mode == Mode::floating ? to_float(doc.profile) : doc.profile;
  const Scalar g = mode == Mode::floating ? doc.params.g.to_float() : doc.params.g;

  const Trajectory traj = orbit(profile, g, initial, kind, opt.steps, opt.tol);
  for (std::size_t i = 0; i < traj.steps.size(); ++i)
    if (traj.steps[i].grazing)
      std::cerr << "warning: near-grazing impact at step " << i << "\n";

  if (opt.out.empty()) {
    write_trajectory(traj, std::cout);
  } else {
    write_trajectory_file(traj, opt.out);
    std::cerr << traj.states.size() - 1 << " steps written to " << opt.out << "\n";
  }
  return kExitPass;
}

int run_verify(const Options& opt) {
  if (opt.in.empty()) throw ParseError("verify requires --in PROFILE");
  const ProfileDocument doc = read_document(opt.in);

  std::optional<Trajectory> traj;
  if (!opt.trajectory.empty()) {
    const Mode mode = parse_mode(opt.mode);
    traj = read_trajectory_file(opt.trajectory, mode, doc.params.g);
  }

  VerifyOptions options;
  if (opt.tol_given) options.tolerance = opt.tol;
  if (opt.steps_given && opt.steps > 0)
    options.escape_periods = std::max<long long>(1, opt.steps / std::max<long long>(doc.N, 1));

  const CheckReport report = verify_document(doc, traj ? &*traj : nullptr, options);
  std::cout << report.to_text();
  std::cout << "overall: " << (report.all_passed() ? "PASS" : "FAIL") << "\n";
  return report.all_passed() ? kExitPass : kExitCheckFailure;
}

int run_plot(const Options& opt) {
  if (opt.in.empty()) throw ParseError("plot requires --in PROFILE");
  if (opt.out.empty()) throw ParseError("plot requires --out DIR");
  const ProfileDocument doc = read_document(opt.in);
  std::filesystem::create_directories(opt.out);
  const std::filesystem::path dir(opt.out);

  plot_zeta(doc.profile, (dir / "zeta.svg").string());
  plot_height(doc.profile, (dir / "f.svg").string());
  std::cerr << "wrote " << (dir / "zeta.svg").string() << ", " << (dir / "f.svg").string()
            << "\n";

  if (!opt.trajectory.empty()) {
    const Mode mode = parse_mode(opt.mode);
    const Trajectory traj = read_trajectory_file(opt.trajectory, mode, doc.params.g);
    plot_velocity(traj, (dir / "velocity.svg").string());
    plot_torus(traj, (dir / "torus.svg").string());
    std::cerr << "wrote " << (dir / "velocity.svg").string() << ", "
              << (dir / "torus.svg").string() << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct, simulate, verify and plot escaping bouncing-ball orbits"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* construct_cmd =
      app.add_subcommand("construct", "build a plate profile from (g, delta)");
  construct_cmd->add_option("--g", opt.g, "gravity, rational 'p/q' or decimal");
  construct_cmd->add_option("--delta", opt.delta, "derivative bound, 0 < delta < g/4");
  construct_cmd->add_option("--w-scale", opt.w_scale, "positive integer multiplier for W");
  construct_cmd->add_option("--out", opt.out, "output profile path (stdout when omitted)");
  construct_cmd->add_option("--sweep", opt.sweep,
                            "file of 'g delta [w_scale]' rows; construct+verify each");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "iterate a map over a profile");
  simulate_cmd->add_option("--in", opt.in, "profile document")->required();
  simulate_cmd->add_option("--map", opt.map, "gs (explicit) or pf (implicit)");
  simulate_cmd->add_option("--mode", opt.mode, "exact or float");
  simulate_cmd->add_option("--steps", opt.steps, "number of bounces");
  simulate_cmd->add_option("--tol", opt.tol, "gap tolerance for the implicit map");
  simulate_cmd->add_option("--t0", opt.t0, "override initial impact time");
  simulate_cmd->add_option("--v0", opt.v0, "override initial velocity");
  simulate_cmd->add_option("--out", opt.out, "trajectory path (stdout when omitted)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the full checker battery");
  verify_cmd->add_option("--in", opt.in, "profile document")->required();
  verify_cmd->add_option("--trajectory", opt.trajectory, "optional trajectory to check");
  verify_cmd->add_option("--mode", opt.mode, "numeric mode of the given trajectory");
  verify_cmd->add_option("--steps", opt.steps, "length of the internally generated orbit")
      ->each([&opt](const std::string&) { opt.steps_given = true; });
  verify_cmd->add_option("--tol", opt.tol, "tolerance for floating-mode checks")
      ->each([&opt](const std::string&) { opt.tol_given = true; });

  CLI::App* plot_cmd = app.add_subcommand("plot", "emit SVG figures");
  plot_cmd->add_option("--in", opt.in, "profile document")->required();
  plot_cmd->add_option("--trajectory", opt.trajectory, "optional trajectory to plot");
  plot_cmd->add_option("--mode", opt.mode, "numeric mode of the given trajectory");
  plot_cmd->add_option("--out", opt.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (app.got_subcommand(construct_cmd)) return run_construct(opt, argc, argv);
    if (app.got_subcommand(simulate_cmd)) return run_simulate(opt);
    if (app.got_subcommand(verify_cmd)) return run_verify(opt);
    if (app.got_subcommand(plot_cmd)) return run_plot(opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ModeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitInputError;
}
