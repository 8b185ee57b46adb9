#include "spinguide/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace spinguide {

namespace {

using nlohmann::json;

/// Typed field access with path-carrying errors and unknown-key rejection.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return j_.contains(key);
  }

  Node child(const std::string& key) const {
    require_present(key);
    return Node(j_.at(key), join(key));
  }

  std::optional<Node> optional_child(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return Node(j_.at(key), join(key));
  }

  double number(const std::string& key) const {
    require_present(key);
    return as_number(j_.at(key), join(key));
  }

  double number_or(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return as_number(j_.at(key), join(key));
  }

  int integer_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer())
      throw ConfigError(join(key) + ": expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key) const {
    require_present(key);
    return as_string(j_.at(key), join(key));
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return as_string(j_.at(key), join(key));
  }

  std::vector<double> number_array(const std::string& key) const {
    require_present(key);
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(join(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], join(key)));
    return out;
  }

  const json& raw(const std::string& key) const {
    require_present(key);
    return j_.at(key);
  }

  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  /// Call after reading every known key; rejects anything left over.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(join(it.key()) + ": unknown key");
  }

 private:
  void require_present(const std::string& key) const {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(join(key) + ": missing required field");
  }
  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    return v.get<double>();
  }
  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path + ": expected a string");
    return v.get<std::string>();
  }

  const json& j_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

GuideTrajectory parse_guide(const Node& g, double default_tf) {
  const std::string kind = g.string("kind");
  GuideTrajectory traj;
  if (kind == "stationary") {
    traj = Stationary{g.number("x0")};
  } else if (kind == "linear") {
    traj = Linear{g.number("x0"), g.number("v")};
  } else if (kind == "corner") {
    traj = Corner{g.number("r"), g.number("theta"), g.number_or("t_f", default_tf)};
  } else if (kind == "parallel_splitter") {
    const std::string side = g.string("side");
    if (side != "left" && side != "right")
      throw ConfigError(g.join("side") + ": expected \"left\" or \"right\"");
    traj = ParallelSplitterBranch{g.number("r"),       g.number("d"),
                                  g.number("m"),       g.number_or("x_l", 0.0),
                                  g.number_or("t_f", default_tf),
                                  side == "left" ? SplitterSide::Left : SplitterSide::Right};
  } else if (kind == "x_branch") {
    const std::string dir = g.string("direction");
    if (dir != "lr" && dir != "rl")
      throw ConfigError(g.join("direction") + ": expected \"lr\" or \"rl\"");
    traj = XBranch{g.number("x_l"), g.number("theta"),
                   dir == "lr" ? XDirection::LeftToRight : XDirection::RightToLeft};
  } else {
    throw ConfigError(g.join("kind") + ": unknown guide kind \"" + kind + "\"");
  }
  g.finish();
  return traj;
}

InitialStateSpec parse_initial_state(const Node& n) {
  InitialStateSpec spec;
  const std::string kind = n.string_or("kind", "ground_mode");
  if (kind == "ground_mode") {
    spec.kind = InitialStateKind::GroundMode;
    spec.guide = n.integer_or("guide", 0);
  } else if (kind == "superposition") {
    spec.kind = InitialStateKind::Superposition;
    spec.guide_a = n.integer_or("guide_a", 0);
    spec.guide_b = n.integer_or("guide_b", 1);
    spec.alpha = n.number_or("alpha", 0.0);
  } else {
    throw ConfigError(n.join("kind") + ": unknown initial state kind \"" + kind + "\"");
  }
  n.finish();
  return spec;
}

int resolve_stride(int requested, double span, double dt) {
  if (requested >= 1) return requested;
  const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt)) : 1;
  const long stride = std::max(1L, steps / 400);
  return static_cast<int>(std::min<long>(stride, 1L << 30));
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Node root(doc, "");
  RunConfig cfg;

  const Node scn = root.child("scenario");
  Scenario& s = cfg.scenario;
  if (auto c = scn.optional_child("constants")) {
    s.constants.J = c->number_or("J", 1.0);
    s.constants.B0 = c->number_or("B0", 1.0);
    s.constants.w = c->number_or("w", 1.0);
    c->finish();
  }
  {
    const Node g = scn.child("grid");
    s.grid = Grid1D(g.number_or("x_min", -40.0), g.number_or("x_max", 40.0),
                    g.integer_or("n_points", 2048));
    g.finish();
  }
  {
    const Node t = scn.child("time");
    s.t0 = t.number_or("t0", 0.0);
    s.t_f = t.number("t_f");
    t.finish();
  }
  if (auto sol = scn.optional_child("solver")) {
    s.solver.dt = sol->number_or("dt", 0.005);
    s.solver.absorber_width = sol->number_or("absorber_width", 5.0);
    s.solver.absorber_strength = sol->number_or("absorber_strength", 1.0);
    s.solver.snapshot_stride = sol->integer_or("snapshot_stride", 0);
    sol->finish();
  } else {
    s.solver.snapshot_stride = 0;
  }
  {
    const json& guides = scn.raw("guides");
    if (!guides.is_array() || guides.empty())
      throw ConfigError("scenario.guides: expected a non-empty array");
    for (std::size_t i = 0; i < guides.size(); ++i) {
      std::ostringstream path;
      path << "scenario.guides[" << i << "]";
      s.guides.push_back(parse_guide(Node(guides[i], path.str()), s.t_f));
    }
  }
  if (auto ini = scn.optional_child("initial_state")) s.initial_state = parse_initial_state(*ini);
  scn.finish();
  s.solver.snapshot_stride = resolve_stride(s.solver.snapshot_stride, s.t_f - s.t0, s.solver.dt);

  if (auto out = root.optional_child("outputs")) {
    cfg.outputs.directory = out->string_or("directory", "out");
    const std::string conv = out->string_or("fidelity_convention", "eq4");
    if (conv == "eq4") {
      cfg.outputs.fidelity_convention = FidelityConvention::Eq4Literal;
    } else if (conv == "phase_matched") {
      cfg.outputs.fidelity_convention = FidelityConvention::PhaseMatched;
    } else {
      throw ConfigError(out->join("fidelity_convention") +
                        ": expected \"eq4\" or \"phase_matched\"");
    }
    if (out->has("snapshot_stride")) {
      const int stride = out->integer_or("snapshot_stride", 0);
      if (stride >= 1) cfg.scenario.solver.snapshot_stride = stride;
    }
    out->finish();
  }

  if (auto sw = root.optional_child("corner_sweep")) {
    CornerSweepSpec spec;
    if (sw->has("r_values")) spec.r_values = sw->number_array("r_values");
    spec.theta_min = sw->number_or("theta_min", spec.theta_min);
    spec.theta_max = sw->number_or("theta_max", spec.theta_max);
    spec.theta_count = sw->integer_or("theta_count", spec.theta_count);
    spec.t_f = sw->number_or("t_f", 10.0);
    if (spec.theta_count < 2) throw ConfigError(sw->join("theta_count") + ": need at least 2");
    sw->finish();
    cfg.corner_sweep = spec;
  }
  if (auto sw = root.optional_child("xjunction_sweep")) {
    XJunctionSweepSpec spec;
    spec.log10_theta_min = sw->number_or("log10_theta_min", spec.log10_theta_min);
    spec.log10_theta_max = sw->number_or("log10_theta_max", spec.log10_theta_max);
    spec.count = sw->integer_or("count", spec.count);
    spec.x_l = sw->number_or("x_l", spec.x_l);
    if (spec.count < 2) throw ConfigError(sw->join("count") + ": need at least 2");
    sw->finish();
    cfg.xjunction_sweep = spec;
  }
  if (auto sw = root.optional_child("coupling_sweep")) {
    CouplingSweepSpec spec;
    if (sw->has("d_values")) spec.d_values = sw->number_array("d_values");
    sw->finish();
    cfg.coupling_sweep = spec;
  }
  if (auto sw = root.optional_child("interference")) {
    InterferenceSpec spec;
    if (sw->has("alphas")) spec.alphas = sw->number_array("alphas");
    spec.count = sw->integer_or("count", spec.count);
    if (spec.count < 2) throw ConfigError(sw->join("count") + ": need at least 2");
    sw->finish();
    cfg.interference = spec;
  }
  if (auto sw = root.optional_child("chain_compare")) {
    ChainCompareSpec spec;
    if (sw->has("spacings")) spec.spacings = sw->number_array("spacings");
    for (double a : spec.spacings)
      if (!(a > 0.0)) throw ConfigError(sw->join("spacings") + ": spacings must be positive");
    sw->finish();
    cfg.chain_compare = spec;
  }
  root.finish();

  try {
    validate_scenario(cfg.scenario);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string resolved_config_json(const RunConfig& cfg) {
  json doc;
  const Scenario& s = cfg.scenario;
  json scn;
  scn["constants"] = {{"J", s.constants.J}, {"B0", s.constants.B0}, {"w", s.constants.w}};
  scn["grid"] = {{"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}, {"n_points", s.grid.n_points}};
  scn["time"] = {{"t0", s.t0}, {"t_f", s.t_f}};
  scn["solver"] = {{"dt", s.solver.dt},
                   {"absorber_width", s.solver.absorber_width},
                   {"absorber_strength", s.solver.absorber_strength},
                   {"snapshot_stride", s.solver.snapshot_stride}};
  json guides = json::array();
  for (const GuideTrajectory& traj : s.guides) {
    json g;
    if (const auto* st = std::get_if<Stationary>(&traj)) {
      g = {{"kind", "stationary"}, {"x0", st->x0}};
    } else if (const auto* li = std::get_if<Linear>(&traj)) {
      g = {{"kind", "linear"}, {"x0", li->x0}, {"v", li->v}};
    } else if (const auto* co = std::get_if<Corner>(&traj)) {
      g = {{"kind", "corner"}, {"r", co->r}, {"theta", co->theta}, {"t_f", co->t_f}};
    } else if (const auto* ps = std::get_if<ParallelSplitterBranch>(&traj)) {
      g = {{"kind", "parallel_splitter"},
           {"r", ps->r},
           {"d", ps->d},
           {"m", ps->m},
           {"x_l", ps->x_l},
           {"t_f", ps->t_f},
           {"side", ps->side == SplitterSide::Left ? "left" : "right"}};
    } else if (const auto* xb = std::get_if<XBranch>(&traj)) {
      g = {{"kind", "x_branch"},
           {"x_l", xb->x_l},
           {"theta", xb->theta},
           {"direction", xb->direction == XDirection::LeftToRight ? "lr" : "rl"}};
    }
    guides.push_back(g);
  }
  scn["guides"] = guides;
  json ini;
  if (s.initial_state.kind == InitialStateKind::GroundMode) {
    ini = {{"kind", "ground_mode"}, {"guide", s.initial_state.guide}};
  } else {
    ini = {{"kind", "superposition"},
           {"guide_a", s.initial_state.guide_a},
           {"guide_b", s.initial_state.guide_b},
           {"alpha", s.initial_state.alpha}};
  }
  scn["initial_state"] = ini;
  doc["scenario"] = scn;
  doc["outputs"] = {
      {"directory", cfg.outputs.directory},
      {"fidelity_convention",
       cfg.outputs.fidelity_convention == FidelityConvention::Eq4Literal ? "eq4"
                                                                         : "phase_matched"}};
  if (cfg.corner_sweep) {
    const auto& sw = *cfg.corner_sweep;
    doc["corner_sweep"] = {{"r_values", sw.r_values},
                           {"theta_min", sw.theta_min},
                           {"theta_max", sw.theta_max},
                           {"theta_count", sw.theta_count},
                           {"t_f", sw.t_f}};
  }
  if (cfg.xjunction_sweep) {
    const auto& sw = *cfg.xjunction_sweep;
    doc["xjunction_sweep"] = {{"log10_theta_min", sw.log10_theta_min},
                              {"log10_theta_max", sw.log10_theta_max},
                              {"count", sw.count},
                              {"x_l", sw.x_l}};
  }
  if (cfg.coupling_sweep) doc["coupling_sweep"] = {{"d_values", cfg.coupling_sweep->d_values}};
  if (cfg.interference) {
    json spec = {{"count", cfg.interference->count}};
    if (!cfg.interference->alphas.empty()) spec["alphas"] = cfg.interference->alphas;
    doc["interference"] = spec;
  }
  if (cfg.chain_compare) doc["chain_compare"] = {{"spacings", cfg.chain_compare->spacings}};
  return doc.dump(2) + "\n";
}

}  // namespace spinguide
