#include "freqstab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "freqstab/errors.hpp"

namespace freqstab {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) {
  throw Error(ErrorCode::SchemaError, what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    schema(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) schema(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, const std::string& where,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  return number(j, key, where);
}

std::optional<double> optional_number(const json& j, const char* key,
                                      const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j, key, where);
}

std::string text_or(const json& j, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) schema(std::string(key) + ": expected a string");
  return j.at(key).get<std::string>();
}

SystemParameters parse_parameters(const json& j) {
  const std::string w = "parameters";
  SystemParameters p;
  p.nominal_frequency = number(j, "f_N", w);
  p.base_power = number(j, "S_N", w);
  p.inertia = number(j, "H", w);
  p.new_energy_share = number_or(j, "K_n", w, 0.0);
  p.virtual_inertia = number_or(j, "K_v", w, 0.0);
  p.load_damping = number(j, "K_L", w);
  p.new_energy_gain = number_or(j, "K_w", w, 0.0);
  p.droop = number(j, "R", w);
  p.hp_fraction = number(j, "F_H", w);
  p.reheat_time = number(j, "T_R", w);
  p.conventional_capacity = number(j, "P_GN", w);
  p.new_energy_capacity = number_or(j, "P_NEW", w, 0.0);
  p.initial_load = number(j, "P_L0", w);
  p.generator_pfr_fraction = number(j, "m", w);
  p.new_energy_pfr_fraction = number_or(j, "n", w, 0.0);
  p.recovery_rate = number_or(j, "K_R", w, 0.0);
  p.online_generation = optional_number(j, "P_G", w);
  p.validate();
  return p;
}

ThresholdConfig parse_thresholds(const json& j) {
  const std::string w = "thresholds";
  ThresholdConfig t;
  t.critical_slope = number(j, "k1", w);
  t.distribution_time = number(j, "T_dist", w);
  t.power_threshold = optional_number(j, "dP_sh", w);
  t.frequency_threshold = optional_number(j, "df_sh", w);
  t.deadband = number_or(j, "f_d", w, 0.0);
  t.steady_state_limit = number(j, "df_ss_lim", w);
  t.transient_limit = number(j, "df_max_lim", w);
  return t;
}

Disturbance parse_disturbance(const json& j) {
  const std::string w = "disturbance";
  const std::string type = text_or(j, "type", "");
  if (type == "step") {
    return StepDisturbance{number(j, "dP0", w), number(j, "t0", w)};
  }
  if (type == "ramp") {
    return RampDisturbance{number(j, "k", w), number(j, "t0", w),
                           number(j, "duration", w)};
  }
  if (type == "short-term") {
    return ShortTermDisturbance{number(j, "dP0", w), number(j, "t0", w),
                                number(j, "fault_duration", w),
                                number(j, "recovery_rate", w)};
  }
  schema("disturbance.type must be one of step, ramp, short-term (got '" +
         type + "')");
}

json disturbance_json(const Disturbance& d) {
  if (const auto* s = std::get_if<StepDisturbance>(&d)) {
    return {{"type", "step"}, {"dP0", s->dP0}, {"t0", s->t0}};
  }
  if (const auto* r = std::get_if<RampDisturbance>(&d)) {
    return {{"type", "ramp"}, {"k", r->k}, {"t0", r->t0},
            {"duration", r->duration}};
  }
  const auto& s = std::get<ShortTermDisturbance>(d);
  return {{"type", "short-term"},
          {"dP0", s.dP0},
          {"t0", s.t0},
          {"fault_duration", s.fault_duration},
          {"recovery_rate", s.recovery_rate}};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    std::ostringstream os;
    os << "row " << row << ", column " << col << ": '" << cell
       << "' is not a finite number";
    throw ParseError(os.str(), row, col);
  }
  return v;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what(), 0, 0);
  }
  if (!j.is_object()) schema(origin + ": top level must be an object");

  ScenarioFile s;
  s.name = text_or(j, "name", origin);
  s.description = text_or(j, "description", "");
  s.calibration = text_or(j, "calibration", "");
  s.scenario.params = parse_parameters(field(j, "parameters", origin));
  s.threshold_config = parse_thresholds(field(j, "thresholds", origin));
  s.thresholds = resolve_thresholds(s.threshold_config, s.scenario.params);
  s.scenario.disturbance = parse_disturbance(field(j, "disturbance", origin));

  const json& sim = field(j, "simulation", origin);
  s.scenario.horizon = number(sim, "horizon", "simulation");
  s.scenario.dt_step = number_or(sim, "dt", "simulation", 1e-3);
  s.scenario.options.deadband = s.thresholds.deadband;
  if (sim.contains("saturation")) {
    if (!sim.at("saturation").is_boolean())
      schema("simulation.saturation: expected true or false");
    s.scenario.options.saturation = sim.at("saturation").get<bool>();
  }
  s.scenario.options.new_energy_lag =
      number_or(sim, "new_energy_lag", "simulation", 0.1);
  s.sample_period = number_or(sim, "sample_period", "simulation", 0.01);
  if (!(s.sample_period >= s.scenario.dt_step)) {
    schema("simulation.sample_period must be >= simulation.dt");
  }
  s.scenario.validate();

  if (j.contains("generators")) {
    const json& g = j.at("generators");
    if (!g.is_array()) schema("generators: expected an array");
    NetworkSnapshot snap;
    snap.disturbance_voltage = number_or(j, "disturbance_voltage", origin, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string w = "generators[" + std::to_string(i) + "]";
      GeneratorCoupling c;
      c.id = text_or(g[i], "id", "G" + std::to_string(i + 1));
      c.internal_voltage = number(g[i], "E", w);
      c.susceptance = number(g[i], "B", w);
      c.angle = number(g[i], "delta", w);
      snap.generators.push_back(c);
    }
    snap.validate();
    s.snapshot = snap;
  }
  return s;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidParameter,
                "cannot open scenario file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string scenario_to_json(const ScenarioFile& s, int indent) {
  const SystemParameters& p = s.scenario.params;
  json params = {{"f_N", p.nominal_frequency},
                 {"S_N", p.base_power},
                 {"H", p.inertia},
                 {"K_n", p.new_energy_share},
                 {"K_v", p.virtual_inertia},
                 {"K_L", p.load_damping},
                 {"K_w", p.new_energy_gain},
                 {"R", p.droop},
                 {"F_H", p.hp_fraction},
                 {"T_R", p.reheat_time},
                 {"P_GN", p.conventional_capacity},
                 {"P_NEW", p.new_energy_capacity},
                 {"P_L0", p.initial_load},
                 {"m", p.generator_pfr_fraction},
                 {"n", p.new_energy_pfr_fraction},
                 {"K_R", p.recovery_rate}};
  if (p.online_generation) params["P_G"] = *p.online_generation;

  const Thresholds& t = s.thresholds;
  json th = {{"k1", t.critical_slope},
             {"T_dist", t.distribution_time},
             {"dP_sh", t.power_threshold},
             {"df_sh", t.frequency_threshold},
             {"f_d", t.deadband},
             {"df_ss_lim", t.steady_state_limit},
             {"df_max_lim", t.transient_limit}};

  json sim = {{"horizon", s.scenario.horizon},
              {"dt", s.scenario.dt_step},
              {"saturation", s.scenario.options.saturation},
              {"new_energy_lag", s.scenario.options.new_energy_lag},
              {"sample_period", s.sample_period}};

  json doc = {{"name", s.name},
              {"description", s.description},
              {"calibration", s.calibration},
              {"parameters", params},
              {"thresholds", th},
              {"disturbance", disturbance_json(s.scenario.disturbance)},
              {"simulation", sim}};
  if (s.snapshot) {
    doc["disturbance_voltage"] = s.snapshot->disturbance_voltage;
    json gens = json::array();
    for (const auto& g : s.snapshot->generators) {
      gens.push_back({{"id", g.id},
                      {"E", g.internal_voltage},
                      {"B", g.susceptance},
                      {"delta", g.angle}});
    }
    doc["generators"] = gens;
  }
  return doc.dump(indent);
}

ResponseSet read_responses_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) header = split_row(line);
  }
  if (header.empty()) schema("responses: empty file");
  if (header[0] != "time") {
    throw ParseError("responses: first header cell must be 'time'", row, 1);
  }

  ResponseSet r;
  std::vector<std::string> freq_ids;
  std::vector<int> column_kind(header.size(), 0);  // 1 power, 2 frequency
  std::set<std::string> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.empty()) throw ParseError("responses: empty column name", row, c + 1);
    if (!seen.insert(h).second) schema("responses: duplicate column '" + h + "'");
    if (h.rfind("freq:", 0) == 0) {
      freq_ids.push_back(h.substr(5));
      column_kind[c] = 2;
    } else {
      r.generator_ids.push_back(h);
      column_kind[c] = 1;
    }
  }
  if (!freq_ids.empty()) {
    if (freq_ids != r.generator_ids) {
      schema("responses: freq: columns must list the power columns' ids in "
             "the same order");
    }
  }
  r.delta_pe.resize(r.generator_ids.size());
  r.frequency.resize(freq_ids.size());

  const std::size_t header_row = row;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << "row " << row << ": expected " << header.size() << " cells, got "
         << cells.size();
      throw ParseError(os.str(), row, 0);
    }
    const double t = parse_cell(cells[0], row, 1);
    if (!r.times.empty() && !(t > r.times.back())) {
      std::ostringstream os;
      os << "responses: row " << row << ": time " << t
         << (t == r.times.back() ? " duplicates" : " precedes")
         << " the previous sample";
      schema(os.str());
    }
    r.times.push_back(t);
    std::size_t pi = 0, fi = 0;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], row, c + 1);
      if (column_kind[c] == 1)
        r.delta_pe[pi++].push_back(v);
      else
        r.frequency[fi++].push_back(v);
    }
  }
  if (row == header_row || r.times.empty()) schema("responses: no data rows");
  r.validate();
  return r;
}

ResponseSet load_responses_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidParameter,
                "cannot open responses file " + path.string());
  }
  return read_responses_csv(in);
}

void write_responses_csv(std::ostream& out, const ResponseSet& r) {
  r.validate();
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "time";
  for (const auto& id : r.generator_ids) out << ',' << id;
  if (r.has_frequency())
    for (const auto& id : r.generator_ids) out << ",freq:" << id;
  out << '\n';
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << r.times[i];
    for (const auto& s : r.delta_pe) out << ',' << s[i];
    for (const auto& s : r.frequency) out << ',' << s[i];
    out << '\n';
  }
  out.precision(old);
}

void write_trace_csv(std::ostream& out, const SimTrace& tr) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "time,df,p_mech,p_dist,p_load_damp\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << tr.times[i] << ',' << tr.df[i] << ',' << tr.p_mech[i] << ','
        << tr.p_dist[i] << ',' << tr.p_load_damp[i] << '\n';
  }
  out.precision(old);
}

SimTrace decimate(const SimTrace& tr, std::size_t every) {
  if (every == 0) {
    throw Error(ErrorCode::InvalidParameter, "decimation factor must be >= 1");
  }
  SimTrace out;
  out.pfr_saturated_at = tr.pfr_saturated_at;
  for (std::size_t i = 0; i < tr.size(); i += every) {
    out.times.push_back(tr.times[i]);
    out.df.push_back(tr.df[i]);
    out.p_mech.push_back(tr.p_mech[i]);
    out.p_dist.push_back(tr.p_dist[i]);
    out.p_load_damp.push_back(tr.p_load_damp[i]);
  }
  return out;
}

}  // namespace freqstab
