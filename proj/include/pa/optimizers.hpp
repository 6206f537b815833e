#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pa/annealing.hpp"
#include "pa/mog.hpp"
#include "pa/objective.hpp"
#include "pa/sampling.hpp"

namespace pa {

struct ApfConfig {
  int particles_per_layer = 200;  // N
  int layers = 5;                 // M
  Matrix diffusion_cov;           // Sigma, also the initial draw covariance
  double decay_alpha = 0.5;       // layer-m diffusion uses decay_alpha^m * Sigma
  double survival_target = 0.5;
  ResamplingScheme resampling = ResamplingScheme::Multinomial;
  SurvivalEstimator survival = SurvivalEstimator::NormalizedEss;

  std::uint64_t budget() const {
    return static_cast<std::uint64_t>(particles_per_layer) * layers;
  }
};

struct PaConfig {
  int initial_samples = 150;  // N0
  int layers = 24;            // M, must match schedule.layers()
  int new_per_layer = 12;     // C, also the mixture component count
  AnnealingSchedule schedule = AnnealingSchedule::apf_simple(24);
  Matrix init_cov;  // Sigma for the initial draw
  SurvivalEstimator survival = SurvivalEstimator::NormalizedEss;

  std::uint64_t budget() const {
    return static_cast<std::uint64_t>(initial_samples) +
           static_cast<std::uint64_t>(layers) * new_per_layer;
  }
};

struct LayerDiagnostics {
  double beta;
  double target_alpha;
  double achieved_alpha;
  int sample_count;  // retained samples at the end of the layer
  bool saturated;
  bool identical_values;
  int respawned_components;  // PA only
  int solve_iterations;
};

struct RunRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::optional<ApfConfig> apf_config;  // snapshot of whichever config ran
  std::optional<PaConfig> pa_config;
  Vector start_state;
  double start_log_y = 0;
  Vector final_estimate;
  double final_log_y = 0;
  double improvement = 0;           // final_log_y - start_log_y, exactly
  std::uint64_t eval_count = 0;     // budgeted evaluations (N*M or N0 + M*C)
  std::uint64_t aux_eval_count = 0; // start-state + final-estimate evaluations
  std::vector<LayerDiagnostics> layers;
  WeightedSampleSet final_set;      // last layer's samples at the final beta
  std::optional<MixtureOfGaussians> final_mixture;  // PA only
};

/// Annealed particle filter: per layer, evaluate the N current samples,
/// solve the temperature for the survival target, normalize, then
/// resample-and-diffuse N fresh samples (discarding the old ones). The final
/// estimate is the weighted mean of the last layer.
RunRecord run_apf(ObjectiveSpec& objective, std::span<const double> start,
                  const ApfConfig& config, RngStream& rng);

/// APF variant that retains every evaluated sample, re-weighting the whole
/// set at each layer's temperature. With `deep_schedule` the per-layer
/// survival targets come from that schedule instead of the constant target.
RunRecord run_apf_retain(ObjectiveSpec& objective, std::span<const double> start,
                         const ApfConfig& config, RngStream& rng,
                         const std::optional<AnnealingSchedule>& deep_schedule = {});

/// Parametric annealing: samples are kept across layers, re-weighted at each
/// layer's temperature from a deep power-law schedule; a C-component mixture
/// is fitted by one weighted EM step per layer and C new samples are drawn
/// from it. The final estimate is the mixture's mode.
RunRecord run_pa(ObjectiveSpec& objective, std::span<const double> start,
                 const PaConfig& config, RngStream& rng);

}  // namespace pa
