#include "flock/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "flock/simulator.hpp"

namespace flock {

namespace fs = std::filesystem;

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      key_(std::move(key)),
      line_(line) {}

IoError::IoError(fs::path path, const std::string& what)
    : std::runtime_error(what + ": " + path.string()), path_(std::move(path)) {}

namespace {

constexpr std::string_view kKeys[] = {"model", "n",  "dim",  "seed", "t_end",      "dt",
                                      "radius", "delta", "k", "vmax", "umax", "box",
                                      "v_init_max", "decimation", "out"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool known_key(std::string_view key) {
  return std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

double to_real(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key, e.line, "`" + key + "`: cannot parse '" + e.value + "' as a number");
  }
  return v;
}

std::uint64_t to_count(const std::string& key, const Entry& e) {
  std::uint64_t v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, e.line,
                      "`" + key + "`: cannot parse '" + e.value + "' as a non-negative integer");
  }
  return v;
}

void require(bool ok, const std::string& key, const Entry& e, const char* invariant) {
  if (!ok) {
    throw ConfigError(key, e.line, "`" + key + "`: invariant " + invariant + " violated");
  }
}

// Parses and checks a single key in isolation.
void apply(ScenarioConfig& c, const std::string& key, const Entry& e) {
  ModelParams& p = c.params;
  if (key == "model") {
    try {
      p.variant = parse_variant(e.value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(key, e.line, "`model`: " + std::string(ex.what()));
    }
  } else if (key == "n") {
    c.n = to_count(key, e);
    require(c.n >= 2, key, e, "n >= 2");
  } else if (key == "dim") {
    const auto d = to_count(key, e);
    require(d == 2 || d == 3, key, e, "dim in {2, 3}");
    c.dim = static_cast<int>(d);
  } else if (key == "seed") {
    c.seed = to_count(key, e);
  } else if (key == "t_end") {
    p.t_end = to_real(key, e);
    require(p.t_end > 0.0, key, e, "t_end > 0");
  } else if (key == "dt") {
    p.dt = to_real(key, e);
    require(p.dt > 0.0, key, e, "dt > 0");
  } else if (key == "radius") {
    p.radius = to_real(key, e);
    require(p.radius > 0.0, key, e, "radius > 0");
  } else if (key == "delta") {
    p.delta = to_real(key, e);
    require(p.delta >= 0.0, key, e, "delta >= 0");
  } else if (key == "k") {
    p.k = to_real(key, e);
    require(p.k > 0.0, key, e, "k > 0");
  } else if (key == "vmax") {
    p.v_max = to_real(key, e);
    require(p.v_max > 0.0, key, e, "vmax > 0");
  } else if (key == "umax") {
    p.u_max = to_real(key, e);
    require(p.u_max > 0.0, key, e, "umax > 0");
  } else if (key == "box") {
    c.box = to_real(key, e);
    require(c.box > 0.0, key, e, "box > 0");
  } else if (key == "v_init_max") {
    c.v_init_max = to_real(key, e);
    require(c.v_init_max >= 0.0, key, e, "v_init_max >= 0");
  } else if (key == "decimation") {
    c.decimation = to_count(key, e);
    require(c.decimation >= 1, key, e, "decimation >= 1");
  } else if (key == "out") {
    require(!e.value.empty(), key, e, "out is non-empty");
    c.output_dir = e.value;
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), line_no, "expected `key = value`");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!known_key(key)) throw ConfigError(key, line_no, "unknown key `" + key + "`");
    if (entries.contains(key)) throw ConfigError(key, line_no, "duplicate key `" + key + "`");
    entries[key] = {std::string(trim(line.substr(eq + 1))), line_no};
  }
  for (const auto& [key, value] : overrides) {
    if (!known_key(key)) throw ConfigError(key, 0, "unknown key `" + key + "`");
    entries[key] = {value, 0};
  }

  ScenarioConfig config;
  // Per-key checks run in document order so the first bad line is reported.
  std::vector<std::pair<std::string, Entry>> ordered(entries.begin(), entries.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.second.line < b.second.line;
  });
  for (const auto& [key, entry] : ordered) apply(config, key, entry);

  for (std::string_view key : kKeys) {
    const bool has_default =
        key == "dim" || key == "dt" || key == "decimation" || key == "box" || key == "v_init_max";
    if (!has_default && !entries.contains(std::string(key))) {
      throw ConfigError(std::string(key), 0, "required key `" + std::string(key) + "` missing");
    }
  }
  if (!(config.params.dt <= config.params.t_end)) {
    const std::string key = entries.contains("dt") ? "dt" : "t_end";
    throw ConfigError(key, entries[key].line, "`" + key + "`: invariant dt <= t_end violated");
  }
  config.params.validate();
  return config;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream out;
  const ModelParams& p = c.params;
  out << "model = " << to_string(p.variant) << '\n'
      << "n = " << c.n << '\n'
      << "dim = " << c.dim << '\n'
      << "seed = " << c.seed << '\n'
      << "t_end = " << format_number(p.t_end) << '\n'
      << "dt = " << format_number(p.dt) << '\n'
      << "radius = " << format_number(p.radius) << '\n'
      << "delta = " << format_number(p.delta) << '\n'
      << "k = " << format_number(p.k) << '\n'
      << "vmax = " << format_number(p.v_max) << '\n'
      << "umax = " << format_number(p.u_max) << '\n'
      << "box = " << format_number(c.box) << '\n'
      << "v_init_max = " << format_number(c.v_init_max) << '\n'
      << "decimation = " << c.decimation << '\n'
      << "out = " << c.output_dir.string() << '\n';
  return out.str();
}

std::string trajectory_header(int dim) {
  return dim == 3 ? "t,agent,px,py,pz,vx,vy,vz" : "t,agent,px,py,vx,vy";
}

void append_trajectory_rows(std::string& out, const SwarmState& state) {
  const std::string t = format_number(state.time());
  const int d = state.dim();
  for (std::size_t i = 0; i < state.size(); ++i) {
    const AgentState& a = state.agent(i);
    out += t;
    out += ',';
    out += std::to_string(i);
    for (int k = 0; k < d; ++k) (out += ',') += format_number(a.position[k]);
    for (int k = 0; k < d; ++k) (out += ',') += format_number(a.velocity[k]);
    out += '\n';
  }
}

void append_metrics_row(std::string& out, const metrics::MetricsRow& row) {
  auto opt = [](std::optional<double> v) { return v ? format_number(*v) : std::string("NA"); };
  const auto& nd = row.neighbor_distance;
  out += format_number(row.time);
  out += ',' + opt(row.gamma);
  out += ',' + opt(nd ? std::optional(nd->min) : std::nullopt);
  out += ',' + opt(nd ? std::optional(nd->mean) : std::nullopt);
  out += ',' + opt(nd ? std::optional(nd->max) : std::nullopt);
  out += ',' + format_number(row.speed_mean);
  out += ',' + format_number(row.cohesion_radius);
  out += ',' + format_number(row.pairwise_dist_variance);
  out += '\n';
}

std::vector<TrajectoryRecord> read_trajectory_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open trajectory");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "empty trajectory file");
  int dim = 0;
  if (line == trajectory_header(2)) {
    dim = 2;
  } else if (line == trajectory_header(3)) {
    dim = 3;
  } else {
    throw IoError(path, "unexpected trajectory header");
  }

  std::vector<TrajectoryRecord> records;
  const std::size_t fields = 2 + 2 * static_cast<std::size_t>(dim);
  std::vector<double> f(fields);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string_view rest = line;
    for (std::size_t k = 0; k < fields; ++k) {
      const auto comma = rest.find(',');
      const std::string_view tok = rest.substr(0, comma);
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), f[k]);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw IoError(path, "malformed trajectory row '" + line + "'");
      }
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (records.empty() || records.back().time != f[0]) records.push_back({f[0], {}});
    AgentState a;
    if (dim == 2) {
      a = {Vector(f[2], f[3]), Vector(f[4], f[5])};
    } else {
      a = {Vector(f[2], f[3], f[4]), Vector(f[5], f[6], f[7])};
    }
    records.back().agents.push_back(a);
  }
  return records;
}

std::vector<metrics::MetricsRow> simulate_metrics(const SwarmState& initial,
                                                  const ModelParams& params) {
  std::vector<metrics::MetricsRow> rows;
  rows.reserve(step_count(params) + 1);
  run(initial, params, std::numeric_limits<std::size_t>::max(),
      [&](std::size_t, const SwarmState& s) { rows.push_back(metrics::compute(s, params.radius)); });
  return rows;
}

std::optional<double> window_mean(std::span<const metrics::MetricsRow> rows, double from,
                                  double to, double (*field)(const metrics::MetricsRow&)) {
  constexpr double kSlack = 1e-9;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (r.time < from - kSlack || r.time > to + kSlack) continue;
    const double v = field(r);
    if (std::isnan(v)) continue;
    sum += v;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

double gamma_or_nan(const metrics::MetricsRow& row) {
  return row.gamma.value_or(std::numeric_limits<double>::quiet_NaN());
}
double dist_mean_or_nan(const metrics::MetricsRow& row) {
  return row.neighbor_distance ? row.neighbor_distance->mean
                               : std::numeric_limits<double>::quiet_NaN();
}
double cohesion_of(const metrics::MetricsRow& row) { return row.cohesion_radius; }

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << contents;
  out.close();
  if (!out) throw IoError(path, "write failed");
}

double relative_std(std::span<const metrics::MetricsRow> rows, double from, double to) {
  const auto mean = window_mean(rows, from, to, cohesion_of);
  if (!mean || *mean == 0.0) return 0.0;
  double ss = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (r.time < from - 1e-9 || r.time > to + 1e-9) continue;
    ss += (r.cohesion_radius - *mean) * (r.cohesion_radius - *mean);
    ++count;
  }
  return std::sqrt(ss / static_cast<double>(count)) / *mean;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw IoError(config.output_dir, "cannot create output directory");

  ScenarioResult result;
  result.trajectory_csv = config.output_dir / "trajectory.csv";
  result.metrics_csv = config.output_dir / "metrics.csv";
  result.summary = config.output_dir / "summary.txt";

  const ModelParams& params = config.params;
  const std::size_t total = step_count(params);
  std::string traj = trajectory_header(config.dim) + '\n';
  std::string metrics_csv = std::string(kMetricsHeader) + '\n';

  const SwarmState initial =
      sample_initial(config.n, config.box, config.v_init_max, config.seed, config.dim);
  try {
    run(initial, params, std::numeric_limits<std::size_t>::max(),
        [&](std::size_t s, const SwarmState& state) {
          const auto row = metrics::compute(state, params.radius);
          result.metrics.push_back(row);
          if (s % config.decimation == 0 || s == total) {
            append_trajectory_rows(traj, state);
            append_metrics_row(metrics_csv, row);
          }
        });
  } catch (const SimulationFault& f) {
    result.fault = f.what();
    result.fault_time = f.time();
  }

  write_file(result.trajectory_csv, traj);
  write_file(result.metrics_csv, metrics_csv);

  const double last = result.metrics.empty() ? 0.0 : result.metrics.back().time;
  const auto final_gamma = result.metrics.empty() ? std::nullopt : result.metrics.back().gamma;
  const auto late_gamma = window_mean(result.metrics, 0.8 * params.t_end, last, gamma_or_nan);
  double max_cohesion = 0.0;
  for (const auto& r : result.metrics) max_cohesion = std::max(max_cohesion, r.cohesion_radius);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  auto opt = [](std::optional<double> v) { return v ? format_number(*v) : std::string("NA"); };
  std::string summary;
  summary += "version = " + std::string(kVersion) + '\n';
  summary += "status = " + std::string(result.fault ? "fault" : "ok") + '\n';
  if (result.fault) {
    summary += "fault = " + *result.fault + '\n';
    summary += "fault_time = " + format_number(*result.fault_time) + '\n';
  }
  summary += "final_gamma = " + opt(final_gamma) + '\n';
  summary += "mean_gamma_last20 = " + opt(late_gamma) + '\n';
  summary += "max_cohesion_radius = " + format_number(max_cohesion) + '\n';
  summary += "wall_clock_s = " + format_number(wall) + '\n';
  std::istringstream echo(format_config(config));
  for (std::string line; std::getline(echo, line);) summary += "config." + line + '\n';
  write_file(result.summary, summary);
  return result;
}

namespace {

std::size_t thread_budget(std::size_t jobs) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FLOCK_THREADS")) {
    std::size_t cap = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc() && cap > 0) threads = cap;
  }
  return std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs, 1));
}

}  // namespace

ComparisonReport run_comparison(const ScenarioConfig& base, std::span<const std::uint64_t> seeds) {
  constexpr Variant kVariants[] = {Variant::VelocityBased, Variant::PositionThreshold,
                                   Variant::PositionNoThreshold};
  ComparisonReport report;
  for (std::uint64_t seed : seeds) {
    for (Variant v : kVariants) {
      ComparisonCell cell;
      cell.seed = seed;
      cell.variant = v;
      report.cells.push_back(std::move(cell));
    }
  }

  const double t_end = base.params.t_end;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < report.cells.size(); idx = next++) {
      ComparisonCell& cell = report.cells[idx];
      ModelParams params = base.params;
      params.variant = cell.variant;
      // Same seed gives the same initial state for every variant.
      const SwarmState initial =
          sample_initial(base.n, base.box, base.v_init_max, cell.seed, base.dim);
      try {
        cell.metrics = simulate_metrics(initial, params);
        cell.final_gamma =
            window_mean(cell.metrics, 0.8 * t_end, t_end, gamma_or_nan).value_or(0.0);
        cell.dist_mean =
            window_mean(cell.metrics, 0.5 * t_end, t_end, dist_mean_or_nan).value_or(0.0);
        cell.cohesion_rel_std = relative_std(cell.metrics, 0.3 * t_end, t_end);
      } catch (const SimulationFault& f) {
        cell.fault = f.what();
      }
    }
  };

  const std::size_t threads = thread_budget(report.cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

std::string ComparisonReport::to_csv() const {
  std::string out = "seed,variant,status,final_gamma,dist_mean,cohesion_rel_std\n";
  for (const auto& c : cells) {
    out += std::to_string(c.seed) + ',' + std::string(to_string(c.variant)) + ',';
    if (c.fault) {
      out += "fault,NA,NA,NA\n";
      continue;
    }
    out += "ok," + format_number(c.final_gamma) + ',' + format_number(c.dist_mean) + ',' +
           format_number(c.cohesion_rel_std) + '\n';
  }
  for (Variant v : {Variant::VelocityBased, Variant::PositionThreshold,
                    Variant::PositionNoThreshold}) {
    double g = 0.0, d = 0.0, s = 0.0;
    std::size_t ok = 0, total = 0;
    for (const auto& c : cells) {
      if (c.variant != v) continue;
      ++total;
      if (c.fault) continue;
      g += c.final_gamma;
      d += c.dist_mean;
      s += c.cohesion_rel_std;
      ++ok;
    }
    if (total == 0) continue;
    out += "mean," + std::string(to_string(v)) + ',' + std::to_string(ok) + '/' +
           std::to_string(total);
    if (ok == 0) {
      out += ",NA,NA,NA\n";
      continue;
    }
    const double m = static_cast<double>(ok);
    out += ',' + format_number(g / m) + ',' + format_number(d / m) + ',' + format_number(s / m) +
           '\n';
  }
  return out;
}

void write_replay_outputs(const unicycle::ReplayConfig& config,
                          const unicycle::ReplayResult& result, const fs::path& output_dir) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError(output_dir, "cannot create output directory");

  std::string traj = std::string(kReplayTrajectoryHeader) + '\n';
  std::string metrics_csv = std::string(kMetricsHeader) + '\n';
  for (std::size_t f = 0; f < result.frames.size(); ++f) {
    const auto& frame = result.frames[f];
    const std::string t = format_number(frame.time);
    for (std::size_t i = 0; i < frame.robots.size(); ++i) {
      const auto& r = frame.robots[i];
      const Vector v = r.velocity();
      traj += t + ',' + std::to_string(i) + ',' + format_number(r.position.x()) + ',' +
              format_number(r.position.y()) + ',' + format_number(v.x()) + ',' +
              format_number(v.y()) + ',' + format_number(r.heading) + ',' +
              format_number(frame.commands[i].v) + ',' + format_number(frame.commands[i].omega) +
              '\n';
    }
    append_metrics_row(metrics_csv, result.metrics[f]);
  }
  write_file(output_dir / "trajectory.csv", traj);
  write_file(output_dir / "metrics.csv", metrics_csv);

  const auto& last = result.metrics.back();
  std::string summary;
  summary += "version = " + std::string(kVersion) + '\n';
  summary += "status = ok\n";
  summary += "final_gamma = " + (last.gamma ? format_number(*last.gamma) : std::string("NA")) + '\n';
  summary += "max_abs_v = " + format_number(result.max_abs_v) + '\n';
  summary += "max_abs_omega = " + format_number(result.max_abs_omega) + '\n';
  summary += "wall_violations = " + std::to_string(result.wall_violations) + '\n';
  summary += "config.seed = " + std::to_string(config.seed) + '\n';
  summary += "config.n = " + std::to_string(config.n) + '\n';
  summary += "config.k_omega = " + format_number(config.k_omega) + '\n';
  summary += "config.dt = " + format_number(config.params.dt) + '\n';
  summary += "config.t_end = " + format_number(config.params.t_end) + '\n';
  write_file(output_dir / "summary.txt", summary);
}

}  // namespace flock
