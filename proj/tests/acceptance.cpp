// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail ID,ID,...]
//
// Criteria named in --expect-fail still print FAIL when they fail but do not
// change the exit status; an expected failure that passes is reported too.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flock/controllers.hpp"
#include "flock/gains.hpp"
#include "flock/metrics.hpp"
#include "flock/scenario.hpp"
#include "flock/simulator.hpp"
#include "flock/unicycle.hpp"
#include "oracle_step.hpp"
#include "test_support.hpp"

using namespace flock;
namespace fs = std::filesystem;

namespace {

constexpr int kSeeds = 10;
constexpr int kNeeded = 8;
const std::vector<double> kDeltaGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

struct Outcome {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<Outcome> outcomes;

void report(const std::string& id, bool pass, const std::string& detail) {
  outcomes.push_back({id, pass, detail});
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- A1-A4 -----------------------------------------------------------------

ScenarioConfig base_config(double delta) {
  return parse_config(
      "model = p-thr\nn = 50\nradius = 7.5\nk = 0.1\nvmax = 2.5\numax = 5\nt_end = 100\n"
      "seed = 1\nout = unused\ndelta = " +
      format_number(delta));
}

const metrics::MetricsRow* row_at(const std::vector<metrics::MetricsRow>& rows, double t) {
  for (const auto& r : rows)
    if (std::abs(r.time - t) < 1e-9) return &r;
  return nullptr;
}

struct Tally {
  int a1 = 0, a2 = 0, a3a = 0, a3b = 0, a4a = 0, a4b = 0;
  double dist_mean = 0.0;  // p-thr neighbor distance over [50, 100], averaged over seeds
  int faults = 0;

  int criteria_met() const {
    return (a1 >= kNeeded) + (a2 >= kNeeded) + (a3a >= kNeeded) + (a3b >= kNeeded) +
           (a4a >= kNeeded) + (a4b >= kNeeded);
  }
};

Tally evaluate(double delta, const std::vector<std::uint64_t>& seeds) {
  const ComparisonReport rep = run_comparison(base_config(delta), seeds);
  Tally t;
  int dist_count = 0;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const ComparisonCell& vb = rep.cells[3 * s + 0];
    const ComparisonCell& thr = rep.cells[3 * s + 1];
    const ComparisonCell& nothr = rep.cells[3 * s + 2];
    if (vb.fault || thr.fault || nothr.fault) {
      ++t.faults;
      continue;
    }
    bool a1 = true;
    for (const auto& r : thr.metrics)
      if (r.time >= 20.0 - 1e-9 && !(r.gamma && *r.gamma >= 0.95)) a1 = false;
    t.a1 += a1;

    const auto early = window_mean(nothr.metrics, 10, 30, gamma_or_nan);
    const auto late = window_mean(nothr.metrics, 80, 100, gamma_or_nan);
    t.a2 += early && late && *late <= *early - 0.02;

    const auto d_thr = window_mean(thr.metrics, 50, 100, dist_mean_or_nan);
    const auto d_vb = window_mean(vb.metrics, 50, 100, dist_mean_or_nan);
    t.a3a += d_thr && d_vb && *d_thr < *d_vb;
    if (d_thr) {
      t.dist_mean += *d_thr;
      ++dist_count;
    }
    const auto g_thr = window_mean(thr.metrics, 80, 100, gamma_or_nan);
    const auto g_vb = window_mean(vb.metrics, 80, 100, gamma_or_nan);
    t.a3b += g_thr && g_vb && *g_thr >= *g_vb;

    std::vector<double> coh;
    for (const auto& r : thr.metrics)
      if (r.time >= 30.0 - 1e-9) coh.push_back(r.cohesion_radius);
    double mean = 0.0, var = 0.0;
    for (double c : coh) mean += c;
    mean /= static_cast<double>(coh.size());
    for (double c : coh) var += (c - mean) * (c - mean);
    var /= static_cast<double>(coh.size());
    t.a4a += mean > 0.0 && std::sqrt(var) / mean <= 0.10;

    const auto* r0 = row_at(thr.metrics, 0.0);
    const auto* r10 = row_at(thr.metrics, 10.0);
    t.a4b += r0 && r10 && r10->pairwise_dist_variance > r0->pairwise_dist_variance;
  }
  if (dist_count > 0) t.dist_mean /= dist_count;
  return t;
}

void flocking_criteria() {
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= kSeeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));

  std::printf("delta calibration (seeds passing, of %d)\n", kSeeds);
  std::printf("  delta   A1  A2 A3a A3b A4a A4b  met  dist_mean[50,100]\n");
  std::map<double, Tally> grid;
  double best = kDeltaGrid.front();
  for (double d : kDeltaGrid) {
    const Tally t = evaluate(d, seeds);
    grid[d] = t;
    std::printf("  %5.2f  %3d %3d %3d %3d %3d %3d  %3d  %.3f%s\n", d, t.a1, t.a2, t.a3a, t.a3b,
                t.a4a, t.a4b, t.criteria_met(), t.dist_mean,
                t.faults ? fmt("  (%g faulted seeds)", t.faults).c_str() : "");
    if (t.criteria_met() > grid[best].criteria_met()) best = d;
  }
  const Tally& t = grid[best];
  std::printf("selected delta = %g\n", best);

  // runtime of a single run at the selected delta
  double worst_runtime = 0.0;
  ModelParams p = base_config(best).params;
  for (std::uint64_t s : seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      (void)simulate_metrics(sample_initial(50, 25.0, 1.0, s), p);
    } catch (const SimulationFault&) {
    }
    worst_runtime = std::max(
        worst_runtime,
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  const std::string at = "delta=" + format_number(best) + ": ";
  report("A1", t.a1 >= kNeeded && worst_runtime <= 10.0,
         at + std::to_string(t.a1) + "/10 seeds with gamma >= 0.95 on [20,100]; slowest run " +
             fmt("%.2f s", worst_runtime));
  report("A2", t.a2 >= kNeeded,
         at + std::to_string(t.a2) + "/10 seeds with no-threshold gamma declining >= 0.02");
  report("A3", t.a3a >= kNeeded && t.a3b >= kNeeded,
         at + "(a) " + std::to_string(t.a3a) + "/10 tighter spacing, (b) " +
             std::to_string(t.a3b) + "/10 gamma >= velocity-based");
  report("A4", t.a4a >= kNeeded && t.a4b >= kNeeded,
         at + std::to_string(t.a4a) + "/10 cohesion rel. std <= 10%, " + std::to_string(t.a4b) +
             "/10 variance(10) > variance(0)");

  bool any_all = false;
  for (const auto& [d, g] : grid) any_all = any_all || g.criteria_met() == 6;
  report("A4-any-delta", any_all, "some grid delta meets all A1-A4 sub-criteria");
  bool band = false;
  for (const auto& [d, g] : grid) band = band || (g.dist_mean >= 1.5 && g.dist_mean <= 2.0);
  report("DIST-BAND", band,
         "mean neighbor distance in [1.5, 2] m for some grid delta (selected: " +
             fmt("%.2f m)", t.dist_mean));
}

// --- A5 ----------------------------------------------------------------------

void replay_criterion() {
  int aligned = 0;
  bool limits = true;
  std::string gammas;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    unicycle::ReplayConfig cfg;
    cfg.seed = seed;
    try {
      const auto r = unicycle::replay_experiment(cfg);
      const auto& last = r.metrics.back();
      const double g = last.gamma ? *last.gamma : -2.0;
      aligned += g >= 0.9;
      limits = limits && r.max_abs_v <= cfg.limits.v_lin_max && r.max_abs_omega <= cfg.limits.omega_max;
      gammas += fmt(" %.3f", g);
    } catch (const SimulationFault& f) {
      gammas += " fault";
    }
  }
  report("A5", aligned >= 4 && limits,
         std::to_string(aligned) + "/5 seeds with gamma(120) >= 0.9 [" + gammas.substr(1) +
             "]; limits " + (limits ? "held" : "violated"));
}

// --- A6 ----------------------------------------------------------------------

bool equal_files(const fs::path& a, const fs::path& b) {
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  return slurp(a) == slurp(b);
}

void property_suite() {
  testing::Rng rng(6);
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };

  bool tri = true, mono = true;
  for (int i = 0; i < 1000; ++i) {
    const double delta = rng.uniform(0.01, 1.0);
    const std::size_t m = 1 + rng.index(20);
    const double d = rng.uniform(0.01, 10.0);
    const double psi = gains::cohesion_separation(d, delta, m);
    const double eq = delta * static_cast<double>(m);
    tri = tri && (d < eq ? psi < 0 : d > eq ? psi > 0 : psi == 0.0);
    mono = mono && gains::cohesion_separation(d * 1.01, delta, m) > psi;
  }
  check(tri, "psi trichotomy");
  check(mono, "psi monotonicity");

  bool cont = true, floor_ok = true, decay = true;
  for (double k : {0.05, 0.1, 0.15, 0.5}) {
    for (std::size_t m = 0; m < 12; ++m) {
      const double t = 1.0 / k;
      const double lo = gains::alignment(std::nextafter(t, 0.0), m, k, true);
      const double hi = gains::alignment(std::nextafter(t, 1e9), m, k, true);
      cont = cont && std::abs(lo - hi) <= 1e-12;
      for (int s = 0; s < 50; ++s)
        floor_ok = floor_ok && gains::alignment(rng.uniform(1e-3, 100), m, k, true) >= k * m;
      decay = decay && gains::alignment(1e6, m, k, false) <= 1e-5 * static_cast<double>(m);
    }
  }
  check(cont, "phi continuity");
  check(floor_ok, "phi floor");
  check(decay, "phi decay");

  bool sat = saturate(Vector(0, 0), 5.0).is_zero();
  for (int i = 0; i < 1000; ++i) {
    const Vector v(rng.uniform(-50, 50), rng.uniform(-50, 50));
    const double lim = rng.uniform(0.1, 10);
    const Vector s = saturate(v, lim);
    sat = sat && s.norm() <= lim &&
          std::abs(s.x() * v.y() - s.y() * v.x()) <= 1e-12 * v.norm() * v.norm() && s.dot(v) > 0;
  }
  check(sat, "saturate");

  bool gam = true;
  for (int i = 0; i < 100; ++i) {
    const SwarmState s = testing::random_state(rng, 10, 8.0, 2.0, 0.0);
    const NeighborGraph g = compute_neighbors(s, 7.5);
    const auto g0 = metrics::alignment(s, g);
    std::vector<AgentState> scaled(s.agents().begin(), s.agents().end());
    std::vector<AgentState> parallel = scaled;
    for (auto& a : scaled) a.velocity = a.velocity * rng.uniform(0.1, 10);
    for (auto& a : parallel) a.velocity = Vector(0.3, -0.4) * rng.uniform(0.1, 10);
    const auto g1 = metrics::alignment(s.advanced(0.0, scaled), g);
    const auto gp = metrics::alignment(s.advanced(0.0, parallel), g);
    if (g0) gam = gam && *g0 >= -1 && *g0 <= 1 && g1 && std::abs(*g1 - *g0) <= 1e-12;
    if (gp) gam = gam && std::abs(*gp - 1.0) <= 1e-12;
  }
  check(gam, "gamma range/parallel/rescaling");

  double equi = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SwarmState s = testing::random_state(rng, 10, 8.0, 2.0, rng.uniform(0, 30));
    ModelParams p;
    p.delta = rng.uniform(0, 0.6);
    p.variant = static_cast<Variant>(i % 3);
    const Vector shift(rng.uniform(-100, 100), rng.uniform(-100, 100));
    const double beta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    std::vector<AgentState> moved, turned;
    std::vector<Vector> imp_moved, imp_turned;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto& a = s.agent(j);
      moved.push_back({a.position + shift, a.velocity});
      turned.push_back({testing::rotate(a.position, beta), testing::rotate(a.velocity, beta)});
      imp_moved.push_back(s.initial_positions()[j] + shift);
      imp_turned.push_back(testing::rotate(s.initial_positions()[j], beta));
    }
    const SwarmState base = step(s, p);
    const SwarmState a = step(SwarmState(s.time(), moved, imp_moved), p);
    const SwarmState b = step(SwarmState(s.time(), turned, imp_turned), p);
    for (std::size_t j = 0; j < s.size(); ++j) {
      equi = std::max(equi, distance(a.agent(j).position, base.agent(j).position + shift));
      equi = std::max(equi,
                      distance(b.agent(j).position, testing::rotate(base.agent(j).position, beta)));
    }
  }
  check(equi <= 1e-9, "step equivariance");

  double imprint = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SwarmState s0 = testing::random_state(rng, 10, 8.0, 2.0, 0.0);
    const SwarmState s(rng.uniform(0.1, 30), {s0.agents().begin(), s0.agents().end()}, [&] {
      std::vector<Vector> p;
      for (const auto& a : s0.agents()) p.push_back(a.position);
      return p;
    }());
    ModelParams p;
    p.delta = rng.uniform(0, 0.6);
    const NeighborGraph g = compute_neighbors(s, p.radius);
    for (std::size_t j = 0; j < s.size(); ++j) {
      Vector psi_only = Vector::zero(2);
      const auto nb = g.neighbors(j);
      for (std::size_t n : nb) {
        const Vector rel = s.agent(n).position - s.agent(j).position;
        psi_only = psi_only + rel * gains::cohesion_separation(rel.norm(), p.delta, nb.size());
      }
      for (bool thr : {true, false}) {
        const Vector u = position_based_control(s, j, nb, p, thr);
        imprint = std::max(imprint, (u - psi_only).norm());
      }
    }
  }
  check(imprint <= 1e-12, "imprint equivalence");

  const fs::path tmp = fs::temp_directory_path() / "flock_acceptance_det";
  fs::remove_all(tmp);
  ScenarioConfig c = base_config(0.4);
  c.params.t_end = 10.0;
  c.output_dir = tmp / "a";
  run_scenario(c);
  c.output_dir = tmp / "b";
  run_scenario(c);
  check(equal_files(tmp / "a" / "trajectory.csv", tmp / "b" / "trajectory.csv") &&
            equal_files(tmp / "a" / "metrics.csv", tmp / "b" / "metrics.csv"),
        "determinism");
  fs::remove_all(tmp);

  double drift = 0.0;
  for (int v = 0; v < 3; ++v) {
    ModelParams p;
    p.delta = 0.5;
    p.variant = static_cast<Variant>(v);
    SwarmState s({{Vector(3, 4), Vector(0, 0)}, {Vector(3.3, 4.4), Vector(0, 0)}});
    for (int i = 0; i < 10000; ++i) s = step(s, p);
    drift = std::max(drift, std::abs(distance(s.agent(0).position, s.agent(1).position) - 0.5));
  }
  check(drift <= 1e-9, "two-agent equilibrium");

  std::string detail = failed.empty() ? "all properties hold" : "failed:";
  for (const auto& f : failed) detail += " [" + f + "]";
  report("A6", failed.empty(), detail);
}

// --- A7 ----------------------------------------------------------------------

void oracle_criterion() {
  testing::Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double t = rng.uniform(0.0, 30.0);
    const SwarmState s = testing::random_state(rng, 5, 8.0, 2.0, t);
    std::vector<oracle::Agent> o;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& a = s.agent(i);
      const auto& p0 = s.initial_positions()[i];
      o.push_back({{a.position.x(), a.position.y()},
                   {a.velocity.x(), a.velocity.y()},
                   {p0.x(), p0.y()}});
    }
    for (int v = 0; v < 3; ++v) {
      ModelParams p;
      p.delta = rng.uniform(0.0, 0.8);
      p.variant = static_cast<Variant>(v);
      const SwarmState next = step(s, p);
      const auto ref = oracle::step(o, t, v, p.delta, p.k, p.radius, p.v_max, p.u_max, p.dt);
      for (std::size_t i = 0; i < s.size(); ++i)
        for (int c = 0; c < 2; ++c) {
          worst = std::max(worst, std::abs(next.agent(i).position[c] - ref[i].p[c]));
          worst = std::max(worst, std::abs(next.agent(i).velocity[c] - ref[i].v[c]));
        }
    }
  }
  report("A7", worst <= 1e-12, "max engine/oracle discrepancy " + fmt("%.3g", worst));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> expected;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--expect-fail") {
      std::stringstream list(argv[++i]);
      for (std::string id; std::getline(list, id, ',');) expected.insert(id);
    }
  }

  flocking_criteria();
  replay_criterion();
  property_suite();
  oracle_criterion();

  int unexpected = 0;
  for (const auto& o : outcomes) {
    if (!o.pass && !expected.count(o.id)) ++unexpected;
    if (o.pass && expected.count(o.id)) std::printf("note: %s passed but was expected to fail\n", o.id.c_str());
  }
  int failed = 0;
  for (const auto& o : outcomes) failed += !o.pass;
  std::printf("%zu criteria, %d failed (%d not in the expected-failure list)\n", outcomes.size(),
              failed, unexpected);
  return unexpected == 0 ? 0 : 1;
}
