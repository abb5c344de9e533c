#include "bounce/document.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bounce {

namespace {

using Json = nlohmann::ordered_json;

Json scalar_json(const Scalar& x) { return to_string(x); }

Scalar scalar_from(const Json& j, const char* key) {
  if (!j.is_string())
    throw ParseError(std::string("field '") + key + "' must be a rational string");
  return parse_scalar(j.get<std::string>(), Mode::exact);
}

long long int_from(const Json& j, const char* key) {
  if (!j.is_number_integer())
    throw ParseError(std::string("field '") + key + "' must be an integer");
  return j.get<long long>();
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

void validate_document(const ProfileDocument& doc) {
  if (doc.N < 2) throw ParseError("document needs N >= 2");
  if (doc.N > 1'000'000) throw ParseError("document period N exceeds the supported maximum");
  if (doc.V < 1) throw ParseError("document needs V >= 1");
  const PlateProfile& p = doc.profile;
  if (p.breakpoints.size() < 2 || p.zeta_nodes.size() < 2 || p.f_pieces.empty())
    throw ParseError("document profile is structurally empty");
  for (std::size_t i = 0; i + 1 < p.zeta_nodes.size(); ++i)
    if (!(p.zeta_nodes[i].tau < p.zeta_nodes[i + 1].tau))
      throw ParseError("zeta nodes must be strictly increasing");
  for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i)
    if (!(p.breakpoints[i].tau < p.breakpoints[i + 1].tau))
      throw ParseError("breakpoints must be strictly increasing");
  if (p.f_pieces.front().lo != 0 || p.f_pieces.back().hi != 1)
    throw ParseError("pieces must cover [0, 1)");
  for (std::size_t i = 0; i + 1 < p.f_pieces.size(); ++i)
    if (p.f_pieces[i].hi != p.f_pieces[i + 1].lo)
      throw ParseError("pieces must tile [0, 1) without gaps");
}

}  // namespace

ProfileDocument make_document(const Instance& instance) {
  ProfileDocument doc;
  doc.params = instance.params;
  doc.N = instance.blueprint.N;
  doc.V = instance.blueprint.V;
  doc.W = instance.blueprint.W;
  doc.eta = instance.blueprint.eta;
  doc.profile = instance.profile;
  return doc;
}

std::vector<Scalar> document_times(const ProfileDocument& doc) {
  DerivedConstants constants;
  constants.N = doc.N;
  constants.V = doc.V;
  constants.W = doc.W;
  constants.eta = doc.eta;
  return build_impact_times(constants, doc.params);
}

PhaseState document_initial_state(const ProfileDocument& doc) {
  const std::vector<Scalar> times = document_times(doc);
  return {Scalar::exact(0), doc.params.g * (times[1] - times[0]) / 2};
}

std::string serialize_document(const ProfileDocument& doc) {
  Json j;
  j["g"] = scalar_json(doc.params.g);
  j["delta"] = scalar_json(doc.params.delta);
  j["w_scale"] = doc.params.w_scale;
  j["N"] = doc.N;
  j["V"] = doc.V;
  j["W"] = scalar_json(doc.W);
  j["eta"] = scalar_json(doc.eta);
  j["breakpoints"] = Json::array();
  for (const Breakpoint& bp : doc.profile.breakpoints)
    j["breakpoints"].push_back({{"tau", scalar_json(bp.tau)}, {"D", scalar_json(bp.target)}});
  j["zeta_nodes"] = Json::array();
  for (const ZetaNode& n : doc.profile.zeta_nodes)
    j["zeta_nodes"].push_back({{"tau", scalar_json(n.tau)}, {"value", scalar_json(n.value)}});
  j["f_pieces"] = Json::array();
  for (const QuadraticPiece& p : doc.profile.f_pieces)
    j["f_pieces"].push_back({{"lo", scalar_json(p.lo)},
                             {"hi", scalar_json(p.hi)},
                             {"a", scalar_json(p.a)},
                             {"b", scalar_json(p.b)},
                             {"c", scalar_json(p.c)}});
  return j.dump(2) + "\n";
}

ProfileDocument parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("document is not valid JSON: ") + e.what());
  }
  try {
    ProfileDocument doc;
    doc.params.g = scalar_from(field(j, "g"), "g");
    doc.params.delta = scalar_from(field(j, "delta"), "delta");
    doc.params.w_scale = int_from(field(j, "w_scale"), "w_scale");
    doc.N = int_from(field(j, "N"), "N");
    doc.V = int_from(field(j, "V"), "V");
    doc.W = scalar_from(field(j, "W"), "W");
    doc.eta = scalar_from(field(j, "eta"), "eta");
    doc.profile.delta = doc.params.delta;
    for (const Json& b : field(j, "breakpoints"))
      doc.profile.breakpoints.push_back(
          {scalar_from(field(b, "tau"), "tau"), scalar_from(field(b, "D"), "D")});
    for (const Json& n : field(j, "zeta_nodes"))
      doc.profile.zeta_nodes.push_back(
          {scalar_from(field(n, "tau"), "tau"), scalar_from(field(n, "value"), "value")});
    for (const Json& p : field(j, "f_pieces")) {
      QuadraticPiece piece;
      piece.lo = scalar_from(field(p, "lo"), "lo");
      piece.hi = scalar_from(field(p, "hi"), "hi");
      piece.a = scalar_from(field(p, "a"), "a");
      piece.b = scalar_from(field(p, "b"), "b");
      piece.c = scalar_from(field(p, "c"), "c");
      doc.profile.f_pieces.push_back(piece);
    }
    validate_document(doc);
    return doc;
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

void write_document(const ProfileDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << serialize_document(doc);
  if (!out) throw Error("failed to write " + path);
}

ProfileDocument read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

void write_trajectory(const Trajectory& traj, std::ostream& os) {
  const bool residuals = traj.kind == MapKind::pf && traj.mode == Mode::floating;
  os << "n,t,v,t_mod_1,v_mod_half_g";
  if (residuals) os << ",residual";
  os << '\n';
  const Scalar half_g = traj.g / 2;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const PhaseState& s = traj.states[n];
    os << n << ',' << to_string(s.t) << ',' << to_string(s.v) << ',' << to_string(frac(s.t))
       << ',' << to_string(mod(s.v, half_g));
    if (residuals)
      os << ',' << to_string(Scalar::floating(n == 0 ? 0.0 : traj.steps[n - 1].residual));
    os << '\n';
  }
}

Trajectory read_trajectory(std::istream& is, Mode mode, const Scalar& g) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("empty trajectory file");
  const bool residuals = header == "n,t,v,t_mod_1,v_mod_half_g,residual";
  if (!residuals && header != "n,t,v,t_mod_1,v_mod_half_g")
    throw ParseError("unrecognized trajectory header: " + header);

  Trajectory traj;
  traj.kind = residuals ? MapKind::pf : MapKind::gs;
  traj.mode = mode;
  traj.g = g.mode() == mode ? g : g.to_float();

  std::string line;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(pos));
        break;
      }
      cells.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (cells.size() != (residuals ? 6u : 5u))
      throw ParseError("trajectory row with wrong column count: " + line);
    if (std::to_string(expected) != cells[0])
      throw ParseError("trajectory rows must be numbered consecutively");
    PhaseState state{parse_scalar(cells[1], mode), parse_scalar(cells[2], mode)};
    traj.states.push_back(std::move(state));
    if (residuals && expected > 0)
      traj.steps.push_back({parse_scalar(cells[5], Mode::floating).raw(), false});
    ++expected;
  }
  if (traj.states.empty()) throw ParseError("trajectory has no states");
  return traj;
}

void write_trajectory_file(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_trajectory(traj, out);
  if (!out) throw Error("failed to write " + path);
}

Trajectory read_trajectory_file(const std::string& path, Mode mode, const Scalar& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  return read_trajectory(in, mode, g);
}

CheckReport verify_document(const ProfileDocument& doc, const Trajectory* trajectory,
                            const VerifyOptions& options) {
  CheckReport report;

  std::vector<Scalar> times;
  try {
    times = document_times(doc);
  } catch (const Error& e) {
    CheckItem item;
    item.id = "document.times";
    item.statement = "impact times can be rebuilt from (N, W, g, delta)";
    item.status = CheckStatus::error;
    item.note = e.what();
    report.items.push_back(std::move(item));
    return report;
  }

  const Scalar& g = doc.params.g;
  const Scalar v_scalar = Scalar::exact(doc.V);

  std::vector<Scalar> head(times.begin(), times.begin() + doc.N);
  std::vector<Scalar> zetas;
  zetas.reserve(head.size());
  for (const Scalar& t : head) zetas.push_back(plate_velocity(doc.profile, t));

  report.merge(check_lemma1(head, zetas, g, doc.N, doc.W, v_scalar));
  report.merge(check_lemma3(times, g, doc.params.delta, doc.eta, doc.W, v_scalar));
  report.merge(check_prop1(doc.profile, times, g));
  report.merge(check_profile(doc.profile));
  report.merge(identity_oracles(times));

  try {
    Trajectory own;
    const Trajectory* traj = trajectory;
    if (!traj) {
      own = orbit(doc.profile, g, document_initial_state(doc), MapKind::gs,
                  options.escape_periods * doc.N, options.tolerance);
      traj = &own;
    }
    const bool traj_exact = traj->mode == Mode::exact;
    report.merge(check_escape(*traj, doc.N, doc.V, traj_exact ? g : g.to_float(),
                              options.tolerance));

    long long flights =
        options.feasibility_flights < 0 ? 2 * doc.N : options.feasibility_flights;
    flights = std::min<long long>(flights, static_cast<long long>(traj->states.size()) - 1);
    Trajectory window = *traj;
    window.states.resize(static_cast<std::size_t>(flights) + 1);
    window.steps.clear();
    if (traj_exact) {
      report.merge(check_feasibility(doc.profile, window, g));
    } else {
      report.merge(check_feasibility(to_float(doc.profile), window, g.to_float()));
    }
  } catch (const Error& e) {
    for (const char* id : {"escape.vgain", "escape.tshift", "feasibility.departure",
                           "feasibility.arrival", "feasibility.gap"}) {
      CheckItem item;
      item.id = id;
      item.statement = "orbit-dependent check";
      item.status = CheckStatus::error;
      item.note = e.what();
      report.items.push_back(std::move(item));
    }
  }
  return report;
}

}  // namespace bounce
