#include "multislit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "multislit/errors.hpp"
#include "multislit/uqsd.hpp"

namespace multislit {
namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double read_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

double read_positive(const json& value, const std::string& path) {
  const double x = read_number(value, path);
  if (!(x > 0.0)) throw ConfigError(path, "must be > 0");
  return x;
}

std::int64_t read_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
  return value.get<std::int64_t>();
}

std::uint64_t read_seed(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  throw ConfigError(path, "expected a non-negative integer");
}

Complex read_amplitude(const json& value, const std::string& path) {
  if (value.is_number()) return {read_number(value, path), 0.0};
  if (value.is_array() && value.size() == 2) {
    return {read_number(value[0], child(path, "0")),
            read_number(value[1], child(path, "1"))};
  }
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

void check_object(const json& j, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw ConfigError(child(path, key), "unknown field");
    }
  }
}

void check_version(const json& j) {
  const json* v = find(j, "schema_version");
  if (!v) throw ConfigError("/schema_version", "required field missing");
  if (read_integer(*v, "/schema_version") != kSchemaVersion) {
    throw ConfigError("/schema_version",
                      "unsupported version (expected " +
                          std::to_string(kSchemaVersion) + ")");
  }
}

void read_constants(const json& j, PhysicalConstants& c) {
  if (const json* v = find(j, "epsilon")) c.width = read_positive(*v, "/epsilon");
  if (const json* v = find(j, "mass")) c.mass = read_positive(*v, "/mass");
  if (const json* v = find(j, "hbar")) c.hbar = read_positive(*v, "/hbar");
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

double quantile(std::vector<double> sorted_values, double q) {
  if (sorted_values.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

const char* mode_name(GeometryMode mode) {
  return mode == GeometryMode::kEqual ? "equal" : "unequal";
}

}  // namespace

std::vector<DetectorState> preset_states(const std::string& name, int n_slits,
                                         std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(n_slits);
  std::vector<DetectorState> states;
  if (name == "camera" || name == "symmetric-overlap") {
    if (n_slits != 3) {
      throw ConfigError("/detector/preset", "'" + name + "' needs n_slits = 3");
    }
    const double r = 1.0 / std::numbers::sqrt2;
    if (name == "camera") {
      states = {DetectorState{1.0, 0.0}, DetectorState{0.0, 1.0},
                DetectorState{0.0, 1.0}};
    } else {
      states = {DetectorState{r, r}, DetectorState{r, -r},
                DetectorState{1.0, 0.0}};
    }
  } else if (name == "identical") {
    states.assign(n, DetectorState::basis(n, 0));
  } else if (name == "orthogonal") {
    for (std::size_t k = 0; k < n; ++k) states.push_back(DetectorState::basis(n, k));
  } else if (name == "random") {
    for (std::size_t k = 0; k < n; ++k) states.push_back(random_state(n, seed + k));
  } else {
    throw ConfigError("/detector/preset", "unknown preset '" + name + "'");
  }
  return states;
}

SlitGeometry ExperimentConfig::geometry() const {
  const double d_min = n_slits == 2 ? l1 : std::min(l1, l2);
  const double t = time ? *time
                        : time_for_sigma_over_d(*sigma_over_d, d_min, constants);
  if (n_slits == 2) return SlitGeometry({l1, 0.0}, constants, t);
  return SlitGeometry::three_slit(l1, l2, t, constants);
}

DetectorConfig ExperimentConfig::detector() const {
  std::vector<DetectorState> kets;
  if (preset) {
    kets = preset_states(*preset, n_slits, seed);
  } else {
    for (const auto& amps : states) kets.emplace_back(amps);
  }
  if (priors.empty()) return DetectorConfig::uniform(std::move(kets));
  return DetectorConfig(std::move(kets), priors);
}

ExperimentConfig parse_experiment_config(const json& j) {
  check_object(j, "", {"schema_version", "n_slits", "priors", "detector",
                       "spacing", "epsilon", "mass", "hbar", "time",
                       "sigma_over_d", "grid", "fringe_index", "seed"});
  check_version(j);
  ExperimentConfig c;

  if (const json* v = find(j, "n_slits")) {
    const auto n = read_integer(*v, "/n_slits");
    if (n != 2 && n != 3) throw ConfigError("/n_slits", "must be 2 or 3");
    c.n_slits = static_cast<int>(n);
  }
  if (const json* v = find(j, "seed")) c.seed = read_seed(*v, "/seed");

  if (const json* v = find(j, "priors")) {
    if (!v->is_array()) throw ConfigError("/priors", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      c.priors.push_back(read_number((*v)[i], "/priors/" + std::to_string(i)));
    }
    if (c.priors.size() != static_cast<std::size_t>(c.n_slits)) {
      throw ConfigError("/priors", "expected one prior per slit");
    }
    try {
      validate_priors(c.priors);
    } catch (const InvalidArgument& e) {
      throw ConfigError("/priors", e.what());
    }
  }

  const json* det = find(j, "detector");
  if (!det) throw ConfigError("/detector", "required field missing");
  check_object(*det, "/detector", {"preset", "states"});
  const json* preset = find(*det, "preset");
  const json* states = find(*det, "states");
  if ((preset == nullptr) == (states == nullptr)) {
    throw ConfigError("/detector", "give exactly one of 'preset' or 'states'");
  }
  if (preset) {
    if (!preset->is_string()) throw ConfigError("/detector/preset", "expected a string");
    c.preset = preset->get<std::string>();
  } else {
    if (!states->is_array() ||
        states->size() != static_cast<std::size_t>(c.n_slits)) {
      throw ConfigError("/detector/states", "expected one state per slit");
    }
    for (std::size_t i = 0; i < states->size(); ++i) {
      const std::string path = "/detector/states/" + std::to_string(i);
      const json& s = (*states)[i];
      if (!s.is_array() || s.empty()) {
        throw ConfigError(path, "expected a non-empty array of amplitudes");
      }
      std::vector<Complex> amps;
      for (std::size_t k = 0; k < s.size(); ++k) {
        amps.push_back(read_amplitude(s[k], child(path, std::to_string(k))));
      }
      c.states.push_back(std::move(amps));
    }
  }

  if (const json* sp = find(j, "spacing")) {
    check_object(*sp, "/spacing", {"d", "l1", "l2"});
    const json* d = find(*sp, "d");
    const json* l1 = find(*sp, "l1");
    const json* l2 = find(*sp, "l2");
    if (d && (l1 || l2)) {
      throw ConfigError("/spacing", "give either 'd' or 'l1'/'l2'");
    }
    if (d) {
      c.l1 = c.l2 = read_positive(*d, "/spacing/d");
    } else {
      if (!l1 || !l2) throw ConfigError("/spacing", "'l1' and 'l2' go together");
      if (c.n_slits == 2) throw ConfigError("/spacing", "two slits take 'd'");
      c.l1 = read_positive(*l1, "/spacing/l1");
      c.l2 = read_positive(*l2, "/spacing/l2");
    }
  }
  read_constants(j, c.constants);

  const json* time = find(j, "time");
  const json* sod = find(j, "sigma_over_d");
  if ((time == nullptr) == (sod == nullptr)) {
    throw ConfigError("", "give exactly one of 'time' or 'sigma_over_d'");
  }
  if (time) {
    c.time = read_number(*time, "/time");
    if (*c.time < 0.0) throw ConfigError("/time", "must be >= 0");
  } else {
    c.sigma_over_d = read_positive(*sod, "/sigma_over_d");
    const double d_min = c.n_slits == 2 ? c.l1 : std::min(c.l1, c.l2);
    if (*c.sigma_over_d * d_min < c.constants.width) {
      throw ConfigError("/sigma_over_d", "sigma would be below the slit width");
    }
  }

  if (const json* g = find(j, "grid")) {
    check_object(*g, "/grid", {"samples_per_period", "window_periods"});
    if (const json* v = find(*g, "samples_per_period")) {
      const auto spp = read_integer(*v, "/grid/samples_per_period");
      if (spp < 16) throw ConfigError("/grid/samples_per_period", "must be >= 16");
      c.samples_per_period = static_cast<int>(spp);
    }
    if (const json* w = find(*g, "window_periods")) {
      if (!w->is_array() || w->size() != 2) {
        throw ConfigError("/grid/window_periods", "expected [lo, hi]");
      }
      c.window_lo_periods = read_number((*w)[0], "/grid/window_periods/0");
      c.window_hi_periods = read_number((*w)[1], "/grid/window_periods/1");
      if (!(c.window_hi_periods - c.window_lo_periods >= 1.0)) {
        throw ConfigError("/grid/window_periods",
                          "window must span at least one fringe period");
      }
    }
  }
  if (const json* v = find(j, "fringe_index")) {
    const auto n = read_integer(*v, "/fringe_index");
    if (n < 1) throw ConfigError("/fringe_index", "must be >= 1");
    c.fringe_index = static_cast<int>(n);
  }

  // Surface invalid states or presets as schema errors.
  try {
    (void)c.detector();
  } catch (const InvalidArgument& e) {
    throw ConfigError("/detector", e.what());
  }
  return c;
}

SweepConfig parse_sweep_config(const json& j) {
  check_object(j, "", {"schema_version", "n_configs", "seed", "geometry_mode",
                       "sigma_over_d", "spacing", "epsilon", "mass", "hbar",
                       "ratio_range", "grid", "fringe_index", "tolerance",
                       "threads"});
  check_version(j);
  SweepConfig c;
  SweepOptions& o = c.options;

  const json* n = find(j, "n_configs");
  if (!n) throw ConfigError("/n_configs", "required field missing");
  const auto count = read_integer(*n, "/n_configs");
  if (count < 1) throw ConfigError("/n_configs", "must be >= 1");
  o.n_configs = static_cast<std::size_t>(count);

  if (const json* v = find(j, "seed")) o.seed = read_seed(*v, "/seed");
  if (const json* v = find(j, "geometry_mode")) {
    const std::string mode = v->is_string() ? v->get<std::string>() : "";
    if (mode == "equal") {
      o.mode = GeometryMode::kEqual;
    } else if (mode == "unequal") {
      o.mode = GeometryMode::kUnequal;
    } else {
      throw ConfigError("/geometry_mode", "expected \"equal\" or \"unequal\"");
    }
  }
  if (const json* v = find(j, "sigma_over_d")) {
    o.sigma_over_d = read_positive(*v, "/sigma_over_d");
  }
  if (const json* sp = find(j, "spacing")) {
    check_object(*sp, "/spacing", {"d"});
    if (const json* d = find(*sp, "d")) o.spacing = read_positive(*d, "/spacing/d");
  }
  read_constants(j, o.constants);
  if (o.sigma_over_d * o.spacing < o.constants.width) {
    throw ConfigError("/sigma_over_d", "sigma would be below the slit width");
  }
  if (const json* r = find(j, "ratio_range")) {
    if (!r->is_array() || r->size() != 2) {
      throw ConfigError("/ratio_range", "expected [min, max]");
    }
    o.ratio_min = read_number((*r)[0], "/ratio_range/0");
    o.ratio_max = read_number((*r)[1], "/ratio_range/1");
    if (!(o.ratio_min > 1.0) || !(o.ratio_max >= o.ratio_min)) {
      throw ConfigError("/ratio_range", "need 1 < min <= max");
    }
  }
  if (const json* g = find(j, "grid")) {
    check_object(*g, "/grid", {"samples_per_period"});
    if (const json* v = find(*g, "samples_per_period")) {
      const auto spp = read_integer(*v, "/grid/samples_per_period");
      if (spp < 16) throw ConfigError("/grid/samples_per_period", "must be >= 16");
      o.samples_per_period = static_cast<int>(spp);
    }
  }
  if (const json* v = find(j, "fringe_index")) {
    const auto k = read_integer(*v, "/fringe_index");
    if (k < 1) throw ConfigError("/fringe_index", "must be >= 1");
    o.fringe_index = static_cast<int>(k);
  }
  if (const json* v = find(j, "tolerance")) {
    o.tolerance = read_number(*v, "/tolerance");
    if (o.tolerance < 0.0) throw ConfigError("/tolerance", "must be >= 0");
  }
  if (const json* v = find(j, "threads")) {
    const auto t = read_integer(*v, "/threads");
    if (t < 0) throw ConfigError("/threads", "must be >= 0");
    o.threads = static_cast<unsigned>(t);
  }
  return c;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

PatternRun run_pattern(const ExperimentConfig& config) {
  const SlitGeometry geom = config.geometry();
  const DetectorConfig det = config.detector();
  const double period = geom.fringe_period();
  const Window window{config.window_lo_periods * period,
                      config.window_hi_periods * period};

  PatternRun run;
  run.pattern = sample_pattern(geom, det, window, config.samples_per_period);
  try {
    run.visibility = extract_visibility(run.pattern, config.fringe_index);
  } catch (const NoFringesError&) {
    run.visibility.reset();
  }
  const double v = run.visibility ? run.visibility->v : 0.0;
  const double d_q = distinguishability(det);
  run.duality = make_duality_report(config.n_slits, d_q, v,
                                    !config.equally_spaced());
  run.bound = visibility_bound(det);

  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["n_slits"] = config.n_slits;
  meta["time"] = geom.time();
  meta["sigma"] = geom.sigma();
  meta["omega"] = std::sqrt(geom.omega_squared());
  meta["fringe_period"] = period;
  meta["samples"] = run.pattern.xs.size();
  meta["d_q"] = d_q;
  meta["d_q_in_range"] = run.duality.d_q_in_range;
  meta["bound"] = run.bound;
  meta["visibility"] = v;
  meta["fringes_found"] = run.visibility.has_value();
  if (run.visibility) {
    meta["x_max"] = run.visibility->x_max;
    meta["x_min"] = run.visibility->x_min;
    meta["i_max"] = run.visibility->i_max;
    meta["i_min"] = run.visibility->i_min;
  }
  meta["fringe_index"] = config.fringe_index;
  meta["duality_lhs"] = run.duality.lhs;
  meta["slack"] = run.duality.slack;
  meta["strict"] = run.duality.strict;
  meta["bound_satisfied"] = run.duality.bound_satisfied;
  run.meta = std::move(meta);
  return run;
}

SweepRun run_sweep(const SweepConfig& config) {
  SweepRun run;
  run.mode = config.options.mode;
  run.reports = sweep_duality(config.options);

  std::vector<double> slacks;
  double max_lhs = -std::numeric_limits<double>::infinity();
  std::size_t out_of_range = 0;
  for (const auto& r : run.reports) {
    slacks.push_back(r.slack);
    max_lhs = std::max(max_lhs, r.lhs);
    if (!r.bound_satisfied) ++run.violation_count;
    if (!r.d_q_in_range) ++out_of_range;
    if (r.v_equal && !(r.v < *r.v_equal)) ++run.strict_failures;
  }
  std::sort(slacks.begin(), slacks.end());

  json s;
  s["schema_version"] = kSchemaVersion;
  s["n_configs"] = config.options.n_configs;
  s["seed"] = config.options.seed;
  s["geometry_mode"] = mode_name(run.mode);
  s["sigma_over_d"] = config.options.sigma_over_d;
  s["tolerance"] = config.options.tolerance;
  s["violation_count"] = run.violation_count;
  s["min_slack"] = slacks.front();
  s["max_lhs"] = max_lhs;
  s["d_q_out_of_range_count"] = out_of_range;
  json q = json::object();
  const std::pair<const char*, double> levels[] = {
      {"0", 0.0},     {"0.05", 0.05}, {"0.25", 0.25}, {"0.5", 0.5},
      {"0.75", 0.75}, {"0.95", 0.95}, {"1", 1.0}};
  for (const auto& [label, level] : levels) q[label] = quantile(slacks, level);
  s["slack_quantiles"] = q;
  if (run.mode == GeometryMode::kUnequal) {
    s["strict_failures"] = run.strict_failures;
  }
  s["all_checks_passed"] = run.all_checks_passed();
  run.summary = std::move(s);
  return run;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string pattern_csv(const IntensityPattern& pattern) {
  std::string out = "x,intensity\n";
  for (std::size_t k = 0; k < pattern.xs.size(); ++k) {
    out += format_number(pattern.xs[k]);
    out += ',';
    out += format_number(pattern.intensities[k]);
    out += '\n';
  }
  return out;
}

json pattern_json(const IntensityPattern& pattern) {
  return json{{"x", pattern.xs}, {"intensity", pattern.intensities}};
}

std::string sweep_csv(const SweepRun& run) {
  const bool unequal = run.mode == GeometryMode::kUnequal;
  std::string out = "index,d_q,v,lhs,slack,satisfied";
  if (unequal) out += ",v_equal,below_equal";
  out += '\n';
  for (const auto& r : run.reports) {
    out += std::to_string(r.index) + ',' + format_number(r.d_q) + ',' +
           format_number(r.v) + ',' + format_number(r.lhs) + ',' +
           format_number(r.slack) + ',' + format_bool(r.bound_satisfied);
    if (unequal) {
      out += ',' + format_number(r.v_equal.value_or(0.0)) + ',' +
             format_bool(r.v_equal && r.v < *r.v_equal);
    }
    out += '\n';
  }
  return out;
}

json sweep_json(const SweepRun& run) {
  json rows = json::array();
  for (const auto& r : run.reports) {
    json row{{"index", r.index},   {"d_q", r.d_q},     {"v", r.v},
             {"lhs", r.lhs},       {"slack", r.slack}, {"satisfied", r.bound_satisfied}};
    if (r.v_equal) {
      row["v_equal"] = *r.v_equal;
      row["below_equal"] = r.v < *r.v_equal;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_pattern_outputs(const PatternRun& run,
                           const std::filesystem::path& out_dir,
                           TableFormat format) {
  ensure_dir(out_dir);
  if (format == TableFormat::kCsv) {
    write_file(out_dir / "pattern.csv", pattern_csv(run.pattern));
  } else {
    write_file(out_dir / "pattern.json", pattern_json(run.pattern).dump(2) + "\n");
  }
  write_file(out_dir / "meta.json", run.meta.dump(2) + "\n");
}

void write_sweep_outputs(const SweepRun& run,
                         const std::filesystem::path& out_dir,
                         TableFormat format) {
  ensure_dir(out_dir);
  if (format == TableFormat::kCsv) {
    write_file(out_dir / "sweep.csv", sweep_csv(run));
  } else {
    write_file(out_dir / "sweep.json", sweep_json(run).dump(2) + "\n");
  }
  write_file(out_dir / "summary.json", run.summary.dump(2) + "\n");
}

}  // namespace multislit
