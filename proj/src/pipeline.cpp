#include "freqstab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "freqstab/estimator.hpp"
#include "freqstab/sfr.hpp"
#include "freqstab/units.hpp"

#ifndef FREQSTAB_VERSION
#define FREQSTAB_VERSION "0.0.0"
#endif

namespace freqstab {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void put(ordered_json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

ordered_json estimate_json(const DisturbanceEstimate& e) {
  ordered_json j;
  j["label"] = to_string(e.label);
  j["onset_time"] = e.onset_time;
  j["inception_time"] = e.inception_time;
  put(j, "dP0", e.dP0);
  put(j, "k_s", e.k_s);
  put(j, "k_m", e.k_m);
  put(j, "t1", e.t1);
  put(j, "fault_duration", e.fault_duration);
  put(j, "threshold_crossing", e.threshold_crossing);
  j["diagnostics"] = {{"fit_slope", e.fit_slope},
                      {"fit_residual_ratio", e.fit_residual_ratio},
                      {"noise_floor", e.noise_floor}};
  return j;
}

ordered_json assessment_json(const Assessment& a) {
  ordered_json j;
  j["label"] = to_string(a.label);
  put(j, "dP0", a.dP0);
  put(j, "dP_max1", a.dP_max1);
  put(j, "dP_max2", a.dP_max2);
  put(j, "dP_max3", a.dP_max3);
  put(j, "dP_max", a.dP_max);
  put(j, "eta", a.eta);
  put(j, "t_m", a.t_m);
  j["verdict"] = to_string(a.verdict);
  return j;
}

ordered_json report_header(const std::string& command, const ScenarioFile* s) {
  ordered_json j;
  j["tool"] = {{"name", "freqstab"}, {"version", version()}};
  j["command"] = command;
  if (s) j["scenario"] = ordered_json::parse(scenario_to_json(*s));
  return j;
}

void flatten(const ordered_json& j, const std::string& prefix,
             std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
              out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump())
        << '\n';
  }
}

std::filesystem::path write_report(const RunConfig& cfg, const std::string& stem,
                                   const ordered_json& j) {
  std::filesystem::create_directories(cfg.output_dir);
  const bool csv = cfg.format == ReportFormat::Csv;
  const auto path = cfg.output_dir / (stem + (csv ? ".csv" : ".json"));
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::InvalidParameter, "cannot write " + path.string());
  }
  if (csv) {
    out << "key,value\n";
    flatten(j, "", out);
  } else {
    out << j.dump(2) << '\n';
  }
  return path;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream out(cfg.output_dir / name);
  if (!out) {
    throw Error(ErrorCode::InvalidParameter,
                "cannot write " + (cfg.output_dir / name).string());
  }
  return out;
}

ResponseSet measurements_for(const RunConfig& cfg, const ScenarioFile& s) {
  if (cfg.responses_path) return load_responses_csv(*cfg.responses_path);
  return synthesize_measurements(s, simulate(s.scenario), cfg.noise_sigma,
                                 cfg.seed);
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

OverLimitRow over_limit_row(const std::filesystem::path& path) {
  const ScenarioFile s = load_scenario(path);
  const SimTrace trace = simulate(s.scenario);
  const PipelineResult res =
      run_analysis(s, synthesize_measurements(s, trace, 0.0, 0));
  if (!res.estimate || !res.assessment || !res.assessment->t_m) {
    throw Error(ErrorCode::InvalidParameter,
                s.name + ": expected a slope disturbance with an over-limit time");
  }
  const auto crossing = find_overlimit_time(trace, s.thresholds.transient_limit);
  if (!crossing) {
    throw Error(ErrorCode::NoCrossing,
                s.name + ": simulation never reached the transient limit");
  }
  OverLimitRow row;
  row.scenario = s.name;
  const auto& e = *res.estimate;
  row.slope = e.k_s ? *e.k_s : e.k_m.value_or(0.0);
  row.t1 = e.t1;
  row.analytic_t_m = *res.assessment->t_m;
  row.simulated_t_m = *crossing - e.inception_time;
  row.relative_error = (row.analytic_t_m - row.simulated_t_m) / row.simulated_t_m;
  return row;
}

}  // namespace

const char* version() { return FREQSTAB_VERSION; }

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidParameter:
    case ErrorCode::OutOfRange:
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
      return 2;
    case ErrorCode::NoOnsetFound:
      return 3;
    case ErrorCode::AmbiguousClassification:
      return 4;
    default:
      return 1;
  }
}

ResponseSet synthesize_measurements(const ScenarioFile& s, const SimTrace& trace,
                                    double noise_sigma, std::uint64_t seed) {
  const auto every = static_cast<std::size_t>(
      std::max(1.0, std::round(s.sample_period / s.scenario.dt_step)));
  const SimTrace sampled = decimate(trace, every);
  const NoiseOptions noise{noise_sigma, seed};
  const double fN = s.scenario.params.nominal_frequency;
  if (s.snapshot) return synthesize_generator_responses(sampled, *s.snapshot, fN, noise);
  const double single[] = {1.0};
  return synthesize_generator_responses(sampled, single, fN, noise);
}

PipelineResult run_analysis(const ScenarioFile& s, const ResponseSet& r) {
  r.validate();
  const SystemParameters& p = s.scenario.params;
  const Thresholds& th = s.thresholds;

  PipelineResult out;
  const TimeSeries dP = total_disturbance_power(r);
  if (r.has_frequency()) {
    out.measured_df = inertial_center_deviation(r, {}, p.nominal_frequency);
  }
  out.estimate = classify(dP, out.measured_df, th, p);
  out.predicted_df.assign(out.measured_df.size(), kNaN);
  if (!out.estimate) return out;

  const DisturbanceEstimate& e = *out.estimate;
  out.assessment = assess(e, p, th);

  const DerivedAggregates d = derive_aggregates(p);
  const SfrDerived sfr = derive_sfr(p, d);
  for (std::size_t i = 0; i < out.measured_df.size(); ++i) {
    const double tau = out.measured_df.times[i] - e.inception_time;
    if (tau < 0.0) continue;
    switch (e.label) {
      case DisturbanceLabel::Step:
        out.predicted_df[i] = step_response(sfr, p, *e.dP0, tau);
        break;
      case DisturbanceLabel::SecondSlope:
        out.predicted_df[i] = ramp_response(sfr, p, *e.k_s, tau);
        break;
      case DisturbanceLabel::MinuteSlope:
        if (tau >= *e.t1) {
          out.predicted_df[i] =
              minute_response(p, d, *e.k_m, *e.t1, th.frequency_threshold, tau);
        }
        break;
      case DisturbanceLabel::ShortTerm:
        break;
    }
  }
  return out;
}

Assessment assess_declared(const ScenarioFile& s) {
  const SystemParameters& p = s.scenario.params;
  const Thresholds& th = s.thresholds;
  const DerivedAggregates d = derive_aggregates(p);
  const Disturbance& dist = s.scenario.disturbance;
  if (const auto* st = std::get_if<StepDisturbance>(&dist)) {
    return step_assess(p, derive_sfr(p, d), st->dP0, th);
  }
  if (const auto* sh = std::get_if<ShortTermDisturbance>(&dist)) {
    return short_term_assess(p, d, sh->dP0, sh->fault_duration, th);
  }
  const auto& r = std::get<RampDisturbance>(dist);
  if (r.k > th.critical_slope) {
    return second_slope_assess(p, derive_sfr(p, d), r.k, th);
  }
  // Minute level: the threshold is reached once the ramp has used up the
  // regulation budget.
  const double budget =
      minute_slope_at_threshold(p, th.frequency_threshold, 1.0);
  return minute_slope_assess(p, d, r.k, budget / r.k, th);
}

Tables reproduce_tables(const std::filesystem::path& dir) {
  Tables t;

  {
    const ScenarioFile s = load_scenario(dir / "short-term.json");
    const DerivedAggregates d = derive_aggregates(s.scenario.params);
    for (double dt : {0.4, 0.5, 0.6}) {
      ShortTermRow row;
      row.fault_duration = dt;
      row.critical_power = short_term_critical_power(
          s.scenario.params, d, dt, s.thresholds.transient_limit);
      row.residual_pu = short_term_residual(s.scenario.params, d, dt,
                                            s.thresholds.transient_limit,
                                            row.critical_power);
      t.short_term.push_back(row);
    }
  }

  {
    const ScenarioFile s = load_scenario(dir / "csee-fs-low-freq.json");
    const SystemParameters& p = s.scenario.params;
    const SfrDerived sfr = derive_sfr(p, derive_aggregates(p));
    const double t0 = disturbance_start(s.scenario.disturbance);
    for (double dP0 : {350.0, 520.0, 690.0}) {
      StepRow row;
      row.dP0 = dP0;
      row.assessment = step_assess(p, sfr, dP0, s.thresholds);
      row.analytic_nadir = step_nadir(sfr, p, dP0).deviation;
      Scenario sc = s.scenario;
      sc.disturbance = StepDisturbance{dP0, t0};
      const SimTrace tr = simulate(sc);
      row.simulated_nadir = min_of(tr.df);
      row.simulated_final = tr.df.back();
      t.step.push_back(row);
    }
  }

  t.second_slope = over_limit_row(dir / "ramp-60.json");
  t.minute_slope = over_limit_row(dir / "minute.json");
  return t;
}

std::string tables_to_json(const Tables& t) {
  ordered_json j = report_header("reproduce", nullptr);

  ordered_json st = ordered_json::array();
  for (const auto& r : t.short_term) {
    st.push_back({{"fault_duration", r.fault_duration},
                  {"critical_power", r.critical_power},
                  {"residual_pu", r.residual_pu}});
  }
  j["short_term"] = st;

  ordered_json step = ordered_json::array();
  for (const auto& r : t.step) {
    ordered_json row = assessment_json(r.assessment);
    row["analytic_nadir"] = r.analytic_nadir;
    row["simulated_nadir"] = r.simulated_nadir;
    row["simulated_final"] = r.simulated_final;
    step.push_back(row);
  }
  j["step"] = step;

  auto over = [](const OverLimitRow& r) {
    ordered_json o;
    o["scenario"] = r.scenario;
    o["slope"] = r.slope;
    put(o, "t1", r.t1);
    o["analytic_t_m"] = r.analytic_t_m;
    o["simulated_t_m"] = r.simulated_t_m;
    o["relative_error"] = r.relative_error;
    return o;
  };
  j["second_slope"] = over(t.second_slope);
  j["minute_slope"] = over(t.minute_slope);
  return j.dump(2);
}

void write_tables_csv(std::ostream& out, const Tables& t) {
  out << "key,value\n";
  flatten(ordered_json::parse(tables_to_json(t)), "", out);
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "reproduce") {
    const Tables t = reproduce_tables(cfg.scenario_dir);
    std::filesystem::create_directories(cfg.output_dir);
    if (cfg.format == ReportFormat::Csv) {
      auto out = open_output(cfg, "tables.csv");
      write_tables_csv(out, t);
    } else {
      auto out = open_output(cfg, "tables.json");
      out << tables_to_json(t) << '\n';
    }
    log << "short-term critical power (MW):";
    for (const auto& r : t.short_term) log << ' ' << r.critical_power;
    log << "\nstep safety margins:";
    for (const auto& r : t.step) log << ' ' << r.assessment.eta.value_or(kNaN);
    log << "\nsecond-level over-limit time: " << t.second_slope.analytic_t_m
        << " s analytic, " << t.second_slope.simulated_t_m << " s simulated\n"
        << "minute-level over-limit time: " << t.minute_slope.analytic_t_m
        << " s analytic, " << t.minute_slope.simulated_t_m << " s simulated\n";
    return 0;
  }

  const ScenarioFile s = load_scenario(cfg.scenario_path);

  if (cfg.command == "simulate") {
    const SimTrace tr = simulate(s.scenario);
    {
      auto out = open_output(cfg, "trace.csv");
      write_trace_csv(out, tr);
    }
    {
      auto out = open_output(cfg, "responses.csv");
      write_responses_csv(out, synthesize_measurements(s, tr, cfg.noise_sigma,
                                                       cfg.seed));
    }
    ordered_json j = report_header("simulate", &s);
    const auto nadir = std::min_element(tr.df.begin(), tr.df.end());
    ordered_json summary;
    summary["nadir"] = *nadir;
    summary["nadir_time"] = tr.times[nadir - tr.df.begin()];
    summary["final_deviation"] = tr.df.back();
    if (auto t = find_overlimit_time(tr, s.thresholds.transient_limit))
      summary["over_limit_time"] = *t;
    if (tr.pfr_saturated_at) summary["pfr_saturated_at"] = *tr.pfr_saturated_at;
    j["summary"] = summary;
    log << "wrote " << write_report(cfg, "simulate", j).string() << '\n';
    return 0;
  }

  if (cfg.command == "classify") {
    const ResponseSet r = measurements_for(cfg, s);
    const TimeSeries df =
        r.has_frequency()
            ? inertial_center_deviation(r, {}, s.scenario.params.nominal_frequency)
            : TimeSeries{};
    const auto est = classify(total_disturbance_power(r), df, s.thresholds,
                              s.scenario.params);
    ordered_json j = report_header("classify", &s);
    j["classification"] = est ? estimate_json(*est) : ordered_json(nullptr);
    log << "label: " << (est ? to_string(est->label) : "none") << '\n';
    write_report(cfg, "classification", j);
    return 0;
  }

  if (cfg.command == "assess") {
    ordered_json j = report_header("assess", &s);
    if (cfg.responses_path) {
      const PipelineResult res = run_analysis(s, measurements_for(cfg, s));
      j["classification"] =
          res.estimate ? estimate_json(*res.estimate) : ordered_json(nullptr);
      j["assessment"] =
          res.assessment ? assessment_json(*res.assessment) : ordered_json(nullptr);
    } else {
      const Assessment a = assess_declared(s);
      j["assessment"] = assessment_json(a);
      log << "verdict: " << to_string(a.verdict) << '\n';
    }
    write_report(cfg, "assessment", j);
    return 0;
  }

  if (cfg.command == "pipeline") {
    const PipelineResult res = run_analysis(s, measurements_for(cfg, s));
    ordered_json j = report_header("pipeline", &s);
    j["classification"] =
        res.estimate ? estimate_json(*res.estimate) : ordered_json(nullptr);
    j["assessment"] =
        res.assessment ? assessment_json(*res.assessment) : ordered_json(nullptr);
    write_report(cfg, "report", j);

    auto out = open_output(cfg, "plot.csv");
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "time,measured_df,predicted_df\n";
    for (std::size_t i = 0; i < res.measured_df.size(); ++i) {
      out << res.measured_df.times[i] << ',' << res.measured_df.values[i] << ',';
      if (!std::isnan(res.predicted_df[i])) out << res.predicted_df[i];
      out << '\n';
    }
    if (res.assessment) {
      log << "label: " << to_string(res.assessment->label)
          << ", verdict: " << to_string(res.assessment->verdict) << '\n';
    } else {
      log << "no disturbance above the thresholds\n";
    }
    return 0;
  }

  throw Error(ErrorCode::InvalidParameter, "unknown command '" + cfg.command + "'");
}

}  // namespace freqstab
