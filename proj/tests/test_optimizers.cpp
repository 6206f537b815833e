#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pa/benchmark.hpp"
#include "pa/optimizers.hpp"
#include "pa/simd/kernels.hpp"

using namespace pa;

namespace {

double norm_of(const Vector& x) { return std::sqrt(simd::dot(x, x)); }

bool records_identical(const RunRecord& a, const RunRecord& b) {
  if (a.start_state != b.start_state || a.final_estimate != b.final_estimate) return false;
  if (a.start_log_y != b.start_log_y || a.final_log_y != b.final_log_y) return false;
  if (a.improvement != b.improvement || a.eval_count != b.eval_count) return false;
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].beta != b.layers[i].beta) return false;
    if (a.layers[i].achieved_alpha != b.layers[i].achieved_alpha) return false;
    if (a.layers[i].sample_count != b.layers[i].sample_count) return false;
  }
  return true;
}

MixtureOfGaussians single_gaussian(int d, double mean_value, double variance) {
  return MixtureOfGaussians(
      {{1.0, Vector(d, mean_value), Matrix::scaled_identity(d, variance)}});
}

}  // namespace

TEST_CASE("budget accounting is exact for both algorithms") {
  // APF 500: M=5, N=100 -> exactly 500 budget evals, plus the start state
  // and the final estimate as auxiliary evaluations.
  {
    ObjectiveSpec objective = make_quadratic_objective(4);
    RngStream rng(1);
    const ApfConfig config = make_apf_config({5, 100, 0.5}, 4, 1.0);
    const RunRecord record = run_apf(objective, Vector(4, 1.0), config, rng);
    CHECK(record.eval_count == 500);
    CHECK(record.aux_eval_count == 2);
    CHECK(objective.eval_count() == 502);
  }
  {
    ObjectiveSpec objective = make_quadratic_objective(4);
    RngStream rng(2);
    const ApfConfig config = make_apf_config({5, 100, 0.5}, 4, 1.0);
    const RunRecord record = run_apf_retain(objective, Vector(4, 1.0), config, rng);
    CHECK(record.eval_count == 500);
    CHECK(objective.eval_count() == 502);
    CHECK(record.final_set.size() == 500);
  }
  // PA 438 = 150 + 24 * 12.
  {
    ObjectiveSpec objective = make_quadratic_objective(4);
    RngStream rng(3);
    const PaConfig config = make_pa_config({150, 24, 12, 0.5, 0.9}, 4, 1.0);
    CHECK(config.budget() == 438);
    const RunRecord record = run_pa(objective, Vector(4, 1.0), config, rng);
    CHECK(record.eval_count == 438);
    CHECK(record.aux_eval_count == 2);
    CHECK(objective.eval_count() == 440);
  }
}

TEST_CASE("pa retains exactly N0 + m*C samples at every layer") {
  ObjectiveSpec objective = make_quadratic_objective(3);
  RngStream rng(4);
  const PaConfig config = make_pa_config({40, 10, 7, 0.5, 0.9}, 3, 1.0);
  const RunRecord record = run_pa(objective, Vector(3, 0.5), config, rng);
  REQUIRE(record.layers.size() == 10);
  for (int m = 1; m <= 10; ++m) {
    CHECK(record.layers[m - 1].sample_count == 40 + m * 7);
  }
  CHECK(record.final_set.size() == 40 + 10 * 7);
}

TEST_CASE("apf reduces the quadratic norm from a fixed start") {
  const int d = 30;
  const Vector start(d, 1.0);
  const double start_norm = norm_of(start);
  const ApfConfig config = make_apf_config({5, 200, 0.5}, d, 1.0);
  int reduced = 0;
  for (int seed = 0; seed < 100; ++seed) {
    ObjectiveSpec objective = make_quadratic_objective(d);
    RngStream rng(1000 + seed);
    const RunRecord record = run_apf(objective, start, config, rng);
    reduced += norm_of(record.final_estimate) < start_norm;
  }
  CHECK(reduced >= 95);
}

TEST_CASE("apf started at the optimum stays put") {
  const int d = 3;
  const Vector mean(d, 2.0);
  const ApfConfig config = make_apf_config({5, 100, 0.5}, d, 1.0);
  for (int seed = 0; seed < 20; ++seed) {
    ObjectiveSpec objective = make_mog_objective(single_gaussian(d, 2.0, 1.0));
    RngStream rng(2000 + seed);
    const RunRecord record = run_apf(objective, mean, config, rng);
    Vector diff(d);
    for (int i = 0; i < d; ++i) diff[i] = record.final_estimate[i] - mean[i];
    CHECK(norm_of(diff) <= 1.0);
    CHECK(record.improvement <= 1e-9);
    CHECK(record.improvement >= -0.51);
  }
}

TEST_CASE("retain without deep schedule hurts; the deep schedule repairs it") {
  const int d = 30;
  const Vector start(d, 1.0);
  const ApfConfig config = make_apf_config({5, 200, 0.5}, d, 1.0);
  const AnnealingSchedule deep =
      AnnealingSchedule::pa_power_law(0.5, 0.65, 5, Vector(d, 1.0));
  std::vector<double> discard, retain, retain_deep;
  for (int seed = 0; seed < 60; ++seed) {
    const std::uint64_t run_seed = 3000 + seed;
    {
      ObjectiveSpec objective = make_quadratic_objective(d);
      RngStream rng(run_seed);
      discard.push_back(norm_of(run_apf(objective, start, config, rng).final_estimate));
    }
    {
      ObjectiveSpec objective = make_quadratic_objective(d);
      RngStream rng(run_seed);
      retain.push_back(
          norm_of(run_apf_retain(objective, start, config, rng).final_estimate));
    }
    {
      ObjectiveSpec objective = make_quadratic_objective(d);
      RngStream rng(run_seed);
      retain_deep.push_back(
          norm_of(run_apf_retain(objective, start, config, rng, deep).final_estimate));
    }
  }
  CHECK(median_of(discard) < median_of(retain));
  CHECK(median_of(retain_deep) < median_of(retain));
}

TEST_CASE("a simple-schedule deep argument reproduces plain retain exactly") {
  const int d = 6;
  const Vector start(d, 0.7);
  const ApfConfig config = make_apf_config({4, 50, 0.5}, d, 1.0);
  ObjectiveSpec obj_a = make_quadratic_objective(d);
  ObjectiveSpec obj_b = make_quadratic_objective(d);
  RngStream rng_a(9), rng_b(9);
  const RunRecord plain = run_apf_retain(obj_a, start, config, rng_a);
  const RunRecord simple_deep =
      run_apf_retain(obj_b, start, config, rng_b, AnnealingSchedule::apf_simple(4));
  CHECK(records_identical(plain, simple_deep));
  CHECK(plain.method == simple_deep.method);
}

TEST_CASE("pa locates a single-gaussian optimum to a tenth of a sigma") {
  // Unimodal sanity oracle: the optimum is known analytically; the schedule
  // is a refinement configuration (search is not the bottleneck here).
  const int d = 5;
  const Vector mean(d, 2.0);
  PaConfig config;
  config.initial_samples = 150;
  config.layers = 24;
  config.new_per_layer = 12;
  config.schedule = AnnealingSchedule::pa_power_law(0.5, 0.88, 24, Vector(d, 0.6));
  config.init_cov = Matrix::identity(d);
  int close = 0;
  for (int seed = 0; seed < 100; ++seed) {
    ObjectiveSpec objective = make_mog_objective(single_gaussian(d, 2.0, 1.0));
    RngStream rng(4000 + seed);
    const RunRecord record = run_pa(objective, mean, config, rng);
    Vector diff(d);
    for (int i = 0; i < d; ++i) diff[i] = record.final_estimate[i] - mean[i];
    close += norm_of(diff) <= 0.1;
  }
  CHECK(close >= 90);
}

TEST_CASE("pa-438 beats apf-500 on paired random mixtures") {
  const int d = 10, k = 5;
  const double s = 5.0;
  const double xi = default_xi_scale(s);
  const PaConfig pa_config = make_pa_config({150, 24, 12, 0.5, 0.9}, d, xi);
  const ApfConfig apf_config = make_apf_config({5, 100, 0.5}, d, xi);
  double mean_pa = 0.0, mean_apf = 0.0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    const MixtureOfGaussians mixture =
        draw_objective(d, k, s, derive_seed(55, {0, static_cast<std::uint64_t>(rep), 0}));
    const std::uint64_t run_seed = derive_seed(55, {0, static_cast<std::uint64_t>(rep), 1});
    {
      ObjectiveSpec objective = make_mog_objective(mixture);
      RngStream rng(run_seed);
      mean_pa += run_pa(objective, Vector(d, 0.0), pa_config, rng).improvement / reps;
    }
    {
      ObjectiveSpec objective = make_mog_objective(mixture);
      RngStream rng(run_seed);
      mean_apf += run_apf(objective, Vector(d, 0.0), apf_config, rng).improvement / reps;
    }
  }
  CHECK(mean_pa >= mean_apf);
}

TEST_CASE("identical seeds and configs reproduce identical run records") {
  const int d = 4;
  const MixtureOfGaussians mixture = draw_objective(d, 3, 2.0, 77);
  const PaConfig pa_config = make_pa_config({30, 8, 5, 0.5, 0.9}, d, 1.0);
  ObjectiveSpec obj_a = make_mog_objective(mixture);
  ObjectiveSpec obj_b = make_mog_objective(mixture);
  RngStream rng_a(123), rng_b(123);
  const RunRecord a = run_pa(obj_a, Vector(d, 0.0), pa_config, rng_a);
  const RunRecord b = run_pa(obj_b, Vector(d, 0.0), pa_config, rng_b);
  CHECK(records_identical(a, b));

  const ApfConfig apf_config = make_apf_config({4, 40, 0.5}, d, 1.0);
  ObjectiveSpec obj_c = make_mog_objective(mixture);
  ObjectiveSpec obj_d = make_mog_objective(mixture);
  RngStream rng_c(321), rng_d(321);
  CHECK(records_identical(run_apf(obj_c, Vector(d, 0.0), apf_config, rng_c),
                          run_apf(obj_d, Vector(d, 0.0), apf_config, rng_d)));
}

TEST_CASE("apf final estimate equals the final layer's weighted mean") {
  const int d = 7;
  ObjectiveSpec objective = make_quadratic_objective(d);
  RngStream rng(88);
  const ApfConfig config = make_apf_config({5, 80, 0.5}, d, 1.0);
  const RunRecord record = run_apf(objective, Vector(d, 1.5), config, rng);
  // Direct recomputation from the stored final set.
  Vector mean(d, 0.0);
  for (std::size_t i = 0; i < record.final_set.size(); ++i) {
    const auto x = record.final_set.sample(i);
    for (int j = 0; j < d; ++j) mean[j] += record.final_set.weight(i) * x[j];
  }
  for (int j = 0; j < d; ++j) {
    CHECK(std::abs(mean[j] - record.final_estimate[j]) <= 1e-12);
  }
}

TEST_CASE("improvement is exactly final minus start log objective") {
  ObjectiveSpec objective = make_quadratic_objective(3);
  RngStream rng(5);
  const PaConfig config = make_pa_config({20, 6, 4, 0.5, 0.9}, 3, 1.0);
  const RunRecord record = run_pa(objective, Vector(3, 1.0), config, rng);
  CHECK(record.improvement == record.final_log_y - record.start_log_y);
}

TEST_CASE("configuration mismatches are rejected") {
  ObjectiveSpec objective = make_quadratic_objective(3);
  RngStream rng(6);
  PaConfig config = make_pa_config({20, 6, 4, 0.5, 0.9}, 3, 1.0);
  CHECK_THROWS_AS(run_pa(objective, Vector(2, 0.0), config, rng), std::invalid_argument);
  config.layers = 7;  // schedule still has 6
  CHECK_THROWS_AS(run_pa(objective, Vector(3, 0.0), config, rng), std::invalid_argument);

  ApfConfig apf = make_apf_config({4, 30, 0.5}, 3, 1.0);
  CHECK_THROWS_AS(
      run_apf_retain(objective, Vector(3, 0.0), apf, rng, AnnealingSchedule::apf_simple(9)),
      std::invalid_argument);
}
