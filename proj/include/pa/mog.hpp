#pragma once

#include <span>
#include <vector>

#include "pa/linalg.hpp"
#include "pa/rng.hpp"
#include "pa/sample_set.hpp"

namespace pa {

/// Mixture of C Gaussians (phi_c, mu_c, Sigma_c). Components are validated
/// and Cholesky-factorized at construction, so evaluation and sampling never
/// re-factorize. Immutable after construction.
class MixtureOfGaussians {
 public:
  struct Init {
    double weight;
    Vector mean;
    Matrix covariance;
  };

  explicit MixtureOfGaussians(std::vector<Init> components);

  int dim() const { return dim_; }
  int component_count() const { return static_cast<int>(components_.size()); }

  double weight(int c) const { return components_[c].weight; }
  const Vector& mean(int c) const { return components_[c].mean; }
  const Matrix& covariance(int c) const { return components_[c].covariance; }
  const CholeskyFactor& factor(int c) const { return components_[c].factor; }

  /// log of phi_c * N(x; mu_c, Sigma_c).
  double component_log_density(int c, std::span<const double> x) const;

 private:
  struct Component {
    double weight;
    Vector mean;
    Matrix covariance;
    CholeskyFactor factor;
    double log_norm;  // -(d/2) log(2 pi) - 1/2 log|Sigma|
    double log_weight;
  };

  int dim_ = 0;
  std::vector<Component> components_;
};

/// log sum_c phi_c N(x; mu_c, Sigma_c), log-sum-exp stabilized.
double log_density(const MixtureOfGaussians& mog, std::span<const double> x);

/// n draws: component chosen proportional to phi, then a Gaussian draw.
std::vector<Vector> sample(const MixtureOfGaussians& mog, RngStream& rng, int n);

/// One draw written into `out`; `z_buffer` must hold dim elements.
void sample_one(const MixtureOfGaussians& mog, RngStream& rng, std::span<double> out,
                std::span<double> z_buffer);

struct EmStepResult {
  MixtureOfGaussians mixture;
  int respawned_components;
};

/// One E step (responsibilities r_ic with external sample weights pi_i) and
/// one M step:
///   w_ic = pi_i r_ic, W_c = sum_i w_ic,
///   phi_c' = W_c, mu_c' = sum w_ic x_i / W_c,
///   Sigma_c' = sum w_ic (x_i - mu_c')(x_i - mu_c')^T / W_c + diag(reg)/phi_c'.
/// A component with W_c < 1e-12 is respawned at the highest-weight sample
/// with covariance diag(reg) and phi = 1/(10C), then phi is renormalized.
EmStepResult weighted_em_step(const MixtureOfGaussians& mog, const WeightedSampleSet& set,
                              std::span<const double> regularizer_diag);

/// mu_c* for c* maximizing the mixture density at the component means;
/// ties break to the lowest index.
Vector mog_mode_estimate(const MixtureOfGaussians& mog);

/// Generative prior over benchmark objectives: mixture weights from a
/// uniform Dirichlet, component precisions from Wishart(I_d, d + dof_offset),
/// means from N(0, range_scale * I_d).
struct MogObjectivePrior {
  int dim;
  int components;
  double range_scale;
  int wishart_dof_offset = 2;
};

MixtureOfGaussians draw_benchmark_objective(const MogObjectivePrior& prior, RngStream& rng);

/// Dirichlet(1, ..., 1) over k categories.
Vector sample_dirichlet_uniform(int k, RngStream& rng);

/// Wishart draw with identity scale matrix and `dof` degrees of freedom
/// (Bartlett construction); requires dof >= dim.
Matrix sample_wishart_identity(int dim, int dof, RngStream& rng);

}  // namespace pa
