// Copyright 2026 The ALEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "alem/al_loop.hpp"
#include "alem/bench.hpp"
#include "alem/cli.hpp"
#include "alem/coreset.hpp"
#include "alem/metrics.hpp"
#include "alem/report.hpp"
#include "alem/warmstart.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
namespace nn = alem::nn;
namespace cs = alem::coreset;
namespace m = alem::metrics;
namespace al = alem::al;
using alem::Dataset;
using alem::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void kcenter_correctness() {
  const auto t0 = Clock::now();
  Rng rng(101);
  int approx_ok = 0;
  double worst_ratio = 0.0;
  for (int t = 0; t < 50; ++t) {
    const cs::FeatureMatrix f(alem::testing::random_matrix(12, 2, rng, 0, 1), cs::Metric::L2);
    const double g = cs::kcenter_greedy(f, {}, 4).cover_radius();
    const double opt = cs::kcenter_bruteforce(f, 4).radius;
    approx_ok += g <= 2.0 * opt;
    worst_ratio = std::max(worst_ratio, g / opt);
  }
  int fuzz_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(400), d = 1 + rng.below(10);
    const cs::FeatureMatrix f(alem::testing::random_matrix(n, d, rng, -2, 2), t % 2 ? cs::Metric::L1 : cs::Metric::L2);
    const std::size_t k = rng.below(n + 1);
    const auto ref = cs::kcenter_greedy(f, {}, k, {n, 1});
    bool ok = std::is_sorted(ref.radius_history.rbegin(), ref.radius_history.rend());
    for (const cs::SelectOptions opt : {cs::SelectOptions{1, 1}, cs::SelectOptions{1 + rng.below(64), 1},
                                        cs::SelectOptions{1 + rng.below(64), 3}}) {
      const auto st = cs::kcenter_greedy(f, {}, k, opt);
      ok = ok && st.centers == ref.centers && st.radius_history == ref.radius_history;
    }
    fuzz_ok += ok;
  }
  const double s = since(t0);
  verdict("AC1", approx_ok == 50 && fuzz_ok == 100 && s < 60.0,
          fmt("2-approx %d/50 (worst greedy/opt %.3f), monotone+chunk-invariant %d/100, %.2f s", approx_ok,
              worst_ratio, fuzz_ok, s));
}

void selector_performance() {
  cs::BenchConfig bc;  // n=50000, d=128, b=2000
  const auto r = cs::bench_kcenter(bc);
  const bool ok = r.distance_evaluations == r.expected_evaluations && r.aux_bytes < 2 * r.predicted_aux_bytes &&
                  r.chunk_invariant && r.wall_s < 60.0;
  verdict("AC2", ok,
          fmt("evaluations %llu (b*n %llu), aux %zu B vs predicted %zu B, chunk %zu/%zu invariant=%s, %.2f s",
              static_cast<unsigned long long>(r.distance_evaluations),
              static_cast<unsigned long long>(r.expected_evaluations), r.aux_bytes, r.predicted_aux_bytes,
              bc.chunk_size, bc.check_chunk_size, r.chunk_invariant ? "yes" : "no", r.wall_s));
}

void gradient_check() {
  Rng rng(303);
  int configs = 0;
  double worst = 0.0;
  while (configs < 20) {
    const auto net = alem::testing::random_net(alem::testing::random_spec(rng), rng);
    Dataset batch;
    if (!alem::testing::kink_free_batch(net, 1 + rng.below(4), rng, batch)) continue;
    const auto a = nn::grad(net, batch).grad;
    const auto n = alem::testing::numeric_gradient(net, batch);
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, alem::testing::relative_error(a[k], n[k]));
    ++configs;
  }
  verdict("AC3", worst < 1e-6, fmt("%d configurations, max relative error %.3g (limit 1e-6)", configs, worst));
}

void lipschitz_empirical() {
  Rng rng(404);
  std::size_t violations = 0, pairs = 0;
  double max_ratio = 0.0;
  for (int k = 0; k < 10; ++k) {
    const nn::NetSpec spec = k < 2   ? nn::default_architecture(10, 128)
                             : k < 4 ? nn::default_architecture(5, 128)
                                     : alem::testing::random_spec(rng);
    const auto net = alem::testing::random_net(spec, rng);
    std::vector<m::LipschitzProbe> probes(1000);
    for (auto& p : probes) {
      p.x.resize(spec.input_dim);
      p.x_tilde.resize(spec.input_dim);
      p.y.resize(net.output_dim());
      for (double& v : p.x) v = rng.uniform();
      for (double& v : p.x_tilde) v = rng.uniform();
      for (double& v : p.y) v = rng.uniform(0, 2);
    }
    const auto r = m::check_lipschitz_empirical(net, probes, 1e-9);
    violations += r.violations;
    pairs += r.pairs;
    max_ratio = std::max(max_ratio, r.max_ratio);
  }
  verdict("AC4", violations == 0,
          fmt("%zu violations over %zu pairs on 10 nets, max |dl|/(bound*|dx|) = %.3g", violations, pairs, max_ratio));
}

void shrink_perturb() {
  Rng rng(505);
  const auto net = alem::testing::random_net({12, {nn::Conv1D{1, 4, 3, 1}, nn::ReLU{}, nn::FullyConnected{40, 6}}}, rng);
  const auto same = alem::warmstart::shrink_and_perturb(net, {1.0, 0.0, 1});
  const bool identity = std::equal(same.params().begin(), same.params().end(), net.params().begin(),
                                   [](double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); });
  nn::Net unit({316, {nn::FullyConnected{316, 316}}});
  for (double& v : unit.params()) v = 1.0;
  const auto out = alem::warmstart::shrink_and_perturb(unit, {0.5, 0.1, 2});
  const auto p = out.params();
  double mean = 0.0, var = 0.0;
  for (double v : p) mean += v;
  mean /= static_cast<double>(p.size());
  for (double v : p) var += (v - mean) * (v - mean);
  var /= static_cast<double>(p.size() - 1);
  const bool ok = identity && std::abs(mean - 0.5) <= 0.002 && std::abs(var - 0.01) <= 0.001;
  verdict("AC5", ok,
          fmt("identity bitwise=%s; %zu params: mean %.5f (0.5 +- 0.002), variance %.6f (0.01 +- 10%%)",
              identity ? "yes" : "no", p.size(), mean, var));
}

void bound_plumbing() {
  int grid_ok = 0;
  double worst = 0.0;
  for (double L : {0.5, 1.0, 3.3})
    for (double g : {0.01, 0.05, 0.2})
      for (std::uint64_t n : {10u, 500u, 50000u}) {
        const double expect = std::sqrt(L * L * std::log(1.0 / g) / (2.0 * static_cast<double>(n)));
        const double rel = std::abs(m::hoeffding_term(L, g, n) - expect) / expect;
        worst = std::max(worst, rel);
        grid_ok += rel <= 1e-12;
      }

  // RHS recomputed from the logged report components.
  const auto run = al::run_experiment([] {
    al::ExperimentConfig c;
    c.pool_size = 200;
    c.schedule = {{20, 20}};
    c.strategy = al::Strategy::parse("coreset");
    c.train.max_epochs = 20;
    c.val_size = 20;
    c.test_size = 50;
    return c;
  }());
  bool bitwise = true;
  for (const auto& rec : run.rounds) {
    const auto back = alem::report::bound_from_json(nlohmann::json::parse(alem::report::to_json(rec.bound).dump()));
    const double rhs = m::assemble_rhs(back.delta, back.lambda_l, m::hoeffding_term(back.loss_cap, back.gamma, back.n));
    bitwise = bitwise && rhs == rec.bound.rhs && back == rec.bound;
  }

  // Pool equal to the labeled set, memorized exactly by a constant net.
  const std::vector<double> x{0.2, 0.4, 0.6, 0.8, 0.1}, y{0.7, 0.3, 0.9};
  nn::Net memo({5, {nn::FullyConnected{5, 4}, nn::ReLU{}, nn::FullyConnected{4, 3}}});
  std::copy(y.begin(), y.end(), memo.biases(2).begin());
  const double loss = nn::l1_loss(nn::forward(memo, x), y);
  m::BoundInputs in;
  in.pool_losses = {loss};
  in.labeled_losses = {loss};
  in.alphas = nn::per_layer_weight_sums(memo);
  in.output_dim = 3;
  alem::Matrix pool(1, 5);
  std::copy(x.begin(), x.end(), pool.row(0).begin());
  const std::vector<std::size_t> centers{0};
  in.delta = cs::cover_radius({pool, cs::Metric::L1}, centers);
  in.output_bound = 1.0;
  const auto deg = m::theorem1_report(in);
  const bool degenerate = deg.lhs == 0.0 && deg.rhs == deg.hoeffding;

  verdict("AC6", grid_ok == 27 && bitwise && degenerate,
          fmt("hoeffding grid %d/27 (max rel err %.2g), RHS recomputed bitwise=%s, degenerate LHS=%g RHS=hoeffding=%s",
              grid_ok, worst, bitwise ? "yes" : "no", deg.lhs, degenerate ? "yes" : "no"));
}

struct StrategyRun {
  std::vector<double> tail1;  // per round
  std::vector<std::size_t> labeled;
  double train_s = 0.0;
  std::uint64_t train_steps = 0;
};

StrategyRun desk_run(const char* strategy, std::uint64_t seed) {
  al::ExperimentConfig c;  // PowerCurve, n=2000, b=100 x 5, val 200, test 1000
  c.strategy = al::Strategy::parse(strategy);
  c.seed = seed;
  const auto r = al::run_experiment(c);
  StrategyRun s;
  for (const auto& rec : r.rounds) {
    s.tail1.push_back(rec.tails.tail1);
    s.labeled.push_back(rec.labeled_count);
  }
  s.train_s = r.total_train_seconds();
  s.train_steps = r.total_train_steps();
  return s;
}

void directional() {
  const auto t0 = Clock::now();
  int wins = 0, matched = 0, sp_within = 0;
  double cold_s = 0.0, warm_s = 0.0, cold_tail = 0.0, warm_tail = 0.0;
  std::uint64_t cold_steps = 0, warm_steps = 0;
  std::string rows;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rnd = desk_run("random", seed);
    const auto cor = desk_run("coreset", seed);
    const auto sp = desk_run("coreset-sp", seed);
    const double target = rnd.tail1.back();
    wins += cor.tail1.back() < target;
    std::size_t reach = 0;
    for (std::size_t t = 0; t < cor.tail1.size() && reach == 0; ++t)
      if (cor.tail1[t] <= target) reach = cor.labeled[t];
    matched += reach != 0 && reach <= rnd.labeled.back();
    sp_within += sp.tail1.back() <= 1.1 * cor.tail1.back();
    cold_s += cor.train_s;
    warm_s += sp.train_s;
    cold_tail += cor.tail1.back();
    warm_tail += sp.tail1.back();
    cold_steps += cor.train_steps;
    warm_steps += sp.train_steps;
    rows += fmt("  seed %llu: tail1 random %.4f coreset %.4f coreset-sp %.4f; coreset reaches random's final at %zu labels; train s cold %.1f sp %.1f\n",
                static_cast<unsigned long long>(seed), target, cor.tail1.back(), sp.tail1.back(), reach, cor.train_s,
                sp.train_s);
  }
  const double total = since(t0);
  std::fputs(rows.c_str(), stdout);
  verdict("AC7", wins >= 4 && matched >= 4 && total < 1800.0,
          fmt("coreset final tail1 < random in %d/5 seeds, budget-to-match <= total budget in %d/5, %.0f s", wins,
              matched, total));
  verdict("AC8", warm_tail <= 1.1 * cold_tail && warm_s < cold_s,
          fmt("coreset-sp tail1 %.4f vs 1.1 x coreset %.4f summed over seeds (per seed within 1.1x: %d/5); train time sp %.1f s < cold %.1f s (steps %llu vs %llu)",
              warm_tail, 1.1 * cold_tail, sp_within, warm_s, cold_s, static_cast<unsigned long long>(warm_steps),
              static_cast<unsigned long long>(cold_steps)));
}

void tail_algebra() {
  std::vector<double> tenths;
  for (int i = 1; i <= 100; ++i) tenths.push_back(0.1 * i);
  const double worked = m::tail_mean(tenths, 0.10);
  const bool example = std::abs(worked - 9.55) <= 4 * std::numeric_limits<double>::epsilon() * 9.55;
  Rng rng(909);
  int nested = 0, perm = 0;
  for (int t = 0; t < 500; ++t) {
    std::vector<double> v(1 + rng.below(3000));
    for (double& x : v) x = rng.uniform() < 0.05 ? rng.uniform(0, 100) : rng.uniform();
    const auto r = m::tail_report(v);
    nested += r.tail1 >= r.tail5 && r.tail5 >= r.tail10 && r.tail10 >= r.mean;
    rng.shuffle(v);
    const auto s = m::tail_report(v);
    perm += s.tail1 == r.tail1 && s.tail5 == r.tail5 && s.tail10 == r.tail10 && s.mean == r.mean;
  }
  verdict("AC9", example && nested == 500 && perm == 500,
          fmt("worked example %.17g (9.55), nested ordering %d/500, permutation invariance exact %d/500", worked,
              nested, perm));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "alem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = alem::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::fputs(err.str().c_str(), stderr);
  return code;
}

void reproducibility() {
  const auto root = fs::temp_directory_path() / "alem_acceptance_repro";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto cfg = root / "repro.ini";
  std::ofstream(cfg) << "[run]\nstrategies = random,coreset,random-sp,coreset-sp\nseeds = 0..1\nout = "
                     << (root / "out").string() << "\n"
                     << "[oracle]\nkind = spectrum-mix\n"
                     << "[pool]\nsize = 300\nbudgets = 30,30,30\nval_size = 50\ntest_size = 200\n"
                     << "[train]\nmax_epochs = 40\n";
  bool ok = cli({"run", cfg.string()}) == 0;
  fs::rename(root / "out", root / "first");
  ok = ok && cli({"run", cfg.string()}) == 0;
  std::size_t compared = 0, differing = 0, missing = 0;
  if (ok) {
    for (const auto& e : fs::recursive_directory_iterator(root / "first")) {
      if (!e.is_regular_file() || e.path().filename() == "timings.csv") continue;
      const auto other = root / "out" / fs::relative(e.path(), root / "first");
      ++compared;
      if (!fs::exists(other)) {
        ++missing;
      } else if (slurp(e.path()) != slurp(other)) {
        ++differing;
      }
    }
    for (const auto& e : fs::recursive_directory_iterator(root / "out"))
      if (e.is_regular_file() && !fs::exists(root / "first" / fs::relative(e.path(), root / "out"))) ++missing;
  }
  verdict("AC10", ok && compared > 0 && differing == 0 && missing == 0,
          fmt("%zu report files compared byte for byte across two runs (wall-clock timings.csv excluded), %zu differ, %zu unmatched",
              compared, differing, missing));
  fs::remove_all(root);
}

}  // namespace

int main() {
  kcenter_correctness();
  selector_performance();
  gradient_check();
  lipschitz_empirical();
  shrink_perturb();
  bound_plumbing();
  tail_algebra();
  reproducibility();
  directional();
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
