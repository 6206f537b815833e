#include "pa/optimizers.hpp"

#include <cmath>
#include <stdexcept>

#include "pa/errors.hpp"
#include "pa/simd/kernels.hpp"

namespace pa {

namespace {

LayerDiagnostics make_diag(const TemperatureSolve& solve, double target, int sample_count,
                           int respawned) {
  return {solve.temperature.beta,
          target,
          solve.achieved_alpha,
          sample_count,
          solve.saturated,
          solve.identical_values,
          respawned,
          solve.iterations};
}

// Shared by the discard and retain variants; `retain` switches the layer
// update between replace-and-discard and append.
RunRecord run_apf_impl(ObjectiveSpec& objective, std::span<const double> start,
                       const ApfConfig& config, RngStream& rng, bool retain,
                       const std::optional<AnnealingSchedule>& deep_schedule) {
  const int d = objective.dim();
  if (static_cast<int>(start.size()) != d) {
    throw std::invalid_argument("run_apf: start dimension mismatch");
  }
  if (config.diffusion_cov.rows() != d) {
    throw std::invalid_argument("run_apf: diffusion covariance dimension mismatch");
  }
  if (deep_schedule && deep_schedule->layers() != config.layers) {
    throw std::invalid_argument("run_apf: deep schedule layer count mismatch");
  }
  const int n = config.particles_per_layer;
  const int layers = config.layers;

  RunRecord record;
  record.method = retain ? (deep_schedule && deep_schedule->kind() == ScheduleKind::PaPowerLaw
                                ? "apf-retain-deep"
                                : "apf-retain")
                         : "apf";
  record.seed = rng.seed();
  record.apf_config = config;
  record.start_state.assign(start.begin(), start.end());
  record.start_log_y = objective.evaluate(start);
  record.aux_eval_count = 1;

  const CholeskyFactor factor = cholesky_with_jitter(config.diffusion_cov);
  Vector z(d);
  std::vector<double> batch_xs(static_cast<std::size_t>(n) * d);
  std::vector<double> batch_ys(n);

  WeightedSampleSet set(d);
  set.reserve(retain ? static_cast<std::size_t>(n) * layers : n);
  for (int i = 0; i < n; ++i) {
    sample_mvn(start, factor.lower, 1.0, rng, {batch_xs.data() + i * d, (std::size_t)d}, z);
  }
  objective.evaluate_batch(batch_xs.data(), n, batch_ys.data());
  record.eval_count += n;
  for (int i = 0; i < n; ++i) {
    set.add({batch_xs.data() + i * d, (std::size_t)d}, batch_ys[i]);
  }

  for (int m = 1; m <= layers; ++m) {
    const double target =
        deep_schedule ? deep_schedule->alpha_at(m) : config.survival_target;
    const TemperatureSolve solve =
        solve_temperature(set.log_values(), target, config.survival);
    set.set_weights(normalize_weights(set.log_values(), solve.temperature.beta));
    record.layers.push_back(make_diag(solve, target, static_cast<int>(set.size()), 0));

    if (m == layers) break;

    const std::vector<std::size_t> picks =
        resample(set.weights(), rng, static_cast<std::size_t>(n), config.resampling);
    const double kernel_scale = std::sqrt(std::pow(config.decay_alpha, m));
    for (int i = 0; i < n; ++i) {
      sample_mvn(set.sample(picks[i]), factor.lower, kernel_scale, rng,
                 {batch_xs.data() + i * d, (std::size_t)d}, z);
    }
    objective.evaluate_batch(batch_xs.data(), n, batch_ys.data());
    record.eval_count += n;
    if (!retain) {
      set = WeightedSampleSet(d);
      set.reserve(n);
    }
    for (int i = 0; i < n; ++i) {
      set.add({batch_xs.data() + i * d, (std::size_t)d}, batch_ys[i]);
    }
  }

  record.final_estimate = set.weighted_mean();
  record.final_log_y = objective.evaluate(record.final_estimate);
  record.aux_eval_count += 1;
  record.improvement = record.final_log_y - record.start_log_y;
  record.final_set = std::move(set);
  return record;
}

}  // namespace

RunRecord run_apf(ObjectiveSpec& objective, std::span<const double> start,
                  const ApfConfig& config, RngStream& rng) {
  return run_apf_impl(objective, start, config, rng, /*retain=*/false, {});
}

RunRecord run_apf_retain(ObjectiveSpec& objective, std::span<const double> start,
                         const ApfConfig& config, RngStream& rng,
                         const std::optional<AnnealingSchedule>& deep_schedule) {
  return run_apf_impl(objective, start, config, rng, /*retain=*/true, deep_schedule);
}

RunRecord run_pa(ObjectiveSpec& objective, std::span<const double> start,
                 const PaConfig& config, RngStream& rng) {
  const int d = objective.dim();
  if (static_cast<int>(start.size()) != d) {
    throw std::invalid_argument("run_pa: start dimension mismatch");
  }
  if (config.init_cov.rows() != d) {
    throw std::invalid_argument("run_pa: init covariance dimension mismatch");
  }
  if (config.schedule.kind() != ScheduleKind::PaPowerLaw) {
    throw std::invalid_argument("run_pa: schedule must be a power law");
  }
  if (config.schedule.layers() != config.layers) {
    throw std::invalid_argument("run_pa: schedule layer count mismatch");
  }
  if (static_cast<int>(config.schedule.xi_diag().size()) != d) {
    throw std::invalid_argument("run_pa: schedule xi dimension mismatch");
  }
  const int n0 = config.initial_samples;
  const int layers = config.layers;
  const int c_new = config.new_per_layer;

  RunRecord record;
  record.method = "pa";
  record.seed = rng.seed();
  record.pa_config = config;
  record.start_state.assign(start.begin(), start.end());
  record.start_log_y = objective.evaluate(start);
  record.aux_eval_count = 1;

  const CholeskyFactor init_factor = cholesky_with_jitter(config.init_cov);
  Vector z(d);
  std::vector<double> batch_xs(static_cast<std::size_t>(std::max(n0, c_new)) * d);
  std::vector<double> batch_ys(std::max(n0, c_new));

  WeightedSampleSet set(d);
  set.reserve(static_cast<std::size_t>(n0) + static_cast<std::size_t>(layers) * c_new);
  for (int i = 0; i < n0; ++i) {
    sample_mvn(start, init_factor.lower, 1.0, rng, {batch_xs.data() + i * d, (std::size_t)d},
               z);
  }
  objective.evaluate_batch(batch_xs.data(), n0, batch_ys.data());
  record.eval_count += n0;
  for (int i = 0; i < n0; ++i) {
    set.add({batch_xs.data() + i * d, (std::size_t)d}, batch_ys[i]);
  }

  std::optional<MixtureOfGaussians> model;
  double final_beta = 1.0;
  for (int m = 1; m <= layers; ++m) {
    const double target = config.schedule.alpha_at(m);
    const TemperatureSolve solve = solve_temperature(set.log_values(), target, config.survival);
    final_beta = solve.temperature.beta;
    set.set_weights(normalize_weights(set.log_values(), final_beta));
    const Vector reg = config.schedule.regularizer_at(m);

    if (m == 1) {
      // Component means seeded by multinomial resampling of the initial
      // weighted set; covariances start at the layer-1 regularizer.
      const std::vector<std::size_t> picks =
          resample_multinomial(set.weights(), rng, static_cast<std::size_t>(c_new));
      std::vector<MixtureOfGaussians::Init> inits;
      inits.reserve(c_new);
      for (int c = 0; c < c_new; ++c) {
        const auto anchor = set.sample(picks[c]);
        inits.push_back({1.0 / c_new, Vector(anchor.begin(), anchor.end()),
                         Matrix::diagonal(reg)});
      }
      model.emplace(std::move(inits));
    }

    EmStepResult em = weighted_em_step(*model, set, reg);
    model.emplace(std::move(em.mixture));

    for (int i = 0; i < c_new; ++i) {
      sample_one(*model, rng, {batch_xs.data() + i * d, (std::size_t)d}, z);
    }
    objective.evaluate_batch(batch_xs.data(), c_new, batch_ys.data());
    record.eval_count += c_new;
    for (int i = 0; i < c_new; ++i) {
      set.add({batch_xs.data() + i * d, (std::size_t)d}, batch_ys[i]);
    }
    record.layers.push_back(make_diag(solve, target, static_cast<int>(set.size()),
                                      em.respawned_components));
  }

  record.final_estimate = mog_mode_estimate(*model);
  record.final_log_y = objective.evaluate(record.final_estimate);
  record.aux_eval_count += 1;
  record.improvement = record.final_log_y - record.start_log_y;
  set.set_weights(normalize_weights(set.log_values(), final_beta));
  record.final_set = std::move(set);
  record.final_mixture = std::move(model);
  return record;
}

}  // namespace pa
