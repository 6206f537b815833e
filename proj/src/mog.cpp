#include "pa/mog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pa/errors.hpp"
#include "pa/sampling.hpp"
#include "pa/simd/kernels.hpp"

namespace pa {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
constexpr double kDeadComponentWeight = 1e-12;
}  // namespace

MixtureOfGaussians::MixtureOfGaussians(std::vector<Init> components) {
  if (components.empty()) {
    throw std::invalid_argument("MixtureOfGaussians: needs at least one component");
  }
  dim_ = static_cast<int>(components.front().mean.size());
  double weight_sum = 0.0;
  components_.reserve(components.size());
  for (auto& init : components) {
    if (static_cast<int>(init.mean.size()) != dim_ ||
        init.covariance.rows() != dim_ || init.covariance.cols() != dim_) {
      throw std::invalid_argument("MixtureOfGaussians: component dimensions disagree");
    }
    if (!(init.weight >= 0.0)) {
      throw std::invalid_argument("MixtureOfGaussians: negative mixture weight");
    }
    weight_sum += init.weight;
    Component c;
    c.weight = init.weight;
    c.mean = std::move(init.mean);
    c.factor = cholesky_with_jitter(init.covariance);
    c.covariance = std::move(init.covariance);
    c.log_norm = -0.5 * (dim_ * kLog2Pi + c.factor.log_det());
    c.log_weight = init.weight > 0.0 ? std::log(init.weight) : kNegInf;
    components_.push_back(std::move(c));
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("MixtureOfGaussians: weights do not sum to one");
  }
}

double MixtureOfGaussians::component_log_density(int c, std::span<const double> x) const {
  const Component& comp = components_[c];
  Vector diff(dim_);
  for (int i = 0; i < dim_; ++i) diff[i] = x[i] - comp.mean[i];
  return comp.log_weight + comp.log_norm - 0.5 * mahalanobis_sq(comp.factor, diff);
}

double log_density(const MixtureOfGaussians& mog, std::span<const double> x) {
  if (static_cast<int>(x.size()) != mog.dim()) {
    throw std::invalid_argument("log_density: dimension mismatch");
  }
  const int C = mog.component_count();
  double max_term = kNegInf;
  std::vector<double> terms(C);
  for (int c = 0; c < C; ++c) {
    terms[c] = mog.component_log_density(c, x);
    max_term = std::max(max_term, terms[c]);
  }
  double acc = 0.0;
  for (const double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

void sample_one(const MixtureOfGaussians& mog, RngStream& rng, std::span<double> out,
                std::span<double> z_buffer) {
  const double u = rng.uniform();
  double cum = 0.0;
  int chosen = mog.component_count() - 1;
  for (int c = 0; c < mog.component_count(); ++c) {
    cum += mog.weight(c);
    if (u < cum) {
      chosen = c;
      break;
    }
  }
  sample_mvn(mog.mean(chosen), mog.factor(chosen).lower, 1.0, rng, out, z_buffer);
}

std::vector<Vector> sample(const MixtureOfGaussians& mog, RngStream& rng, int n) {
  std::vector<Vector> draws(n, Vector(mog.dim()));
  Vector z(mog.dim());
  for (auto& x : draws) sample_one(mog, rng, x, z);
  return draws;
}

EmStepResult weighted_em_step(const MixtureOfGaussians& mog, const WeightedSampleSet& set,
                              std::span<const double> regularizer_diag) {
  const int d = mog.dim();
  const int C = mog.component_count();
  const std::size_t n = set.size();
  if (set.dim() != d) throw std::invalid_argument("weighted_em_step: dimension mismatch");
  if (n == 0) throw std::invalid_argument("weighted_em_step: empty sample set");
  if (!set.normalized()) throw std::logic_error("weighted_em_step: weights not normalized");
  if (static_cast<int>(regularizer_diag.size()) != d) {
    throw std::invalid_argument("weighted_em_step: regularizer dimension mismatch");
  }

  // E step: w_ic = pi_i * r_ic with per-row log-sum-exp.
  std::vector<double> w(n * C, 0.0);
  std::vector<double> row(C);
  for (std::size_t i = 0; i < n; ++i) {
    const double pi_i = set.weight(i);
    if (pi_i == 0.0) continue;
    const auto x = set.sample(i);
    double max_term = kNegInf;
    for (int c = 0; c < C; ++c) {
      row[c] = mog.component_log_density(c, x);
      max_term = std::max(max_term, row[c]);
    }
    double denom = 0.0;
    for (int c = 0; c < C; ++c) {
      row[c] = std::exp(row[c] - max_term);
      denom += row[c];
    }
    const double scale = pi_i / denom;
    for (int c = 0; c < C; ++c) w[i * C + c] = row[c] * scale;
  }

  // M step.
  std::vector<double> totals(C, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < C; ++c) totals[c] += w[i * C + c];
  }

  std::vector<MixtureOfGaussians::Init> inits(C);
  std::vector<int> dead;
  for (int c = 0; c < C; ++c) {
    if (totals[c] < kDeadComponentWeight) {
      dead.push_back(c);
      continue;
    }
    const double inv_total = 1.0 / totals[c];
    Vector mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double wic = w[i * C + c];
      if (wic != 0.0) simd::axpy(wic, set.sample(i), mean);
    }
    for (double& v : mean) v *= inv_total;

    Matrix cov(d, d);
    Vector diff(d);
    for (std::size_t i = 0; i < n; ++i) {
      const double wic = w[i * C + c];
      if (wic == 0.0) continue;
      const auto x = set.sample(i);
      for (int j = 0; j < d; ++j) diff[j] = x[j] - mean[j];
      for (int r = 0; r < d; ++r) {
        simd::active_kernels().axpy(wic * diff[r], diff.data() + r, cov.row(r) + r,
                                    static_cast<std::size_t>(d - r));
      }
    }
    const double phi = totals[c];
    for (int r = 0; r < d; ++r) {
      for (int col = r; col < d; ++col) {
        double v = cov(r, col) * inv_total;
        if (r == col) v += regularizer_diag[r] / phi;
        cov(r, col) = v;
        cov(col, r) = v;
      }
    }
    inits[c] = {phi, std::move(mean), std::move(cov)};
  }

  // Starved components are re-seeded at the highest-weight sample with the
  // regularizer as covariance; all weights are then renormalized.
  if (!dead.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (set.weight(i) > set.weight(best)) best = i;
    }
    const auto anchor = set.sample(best);
    for (const int c : dead) {
      inits[c] = {1.0 / (10.0 * C), Vector(anchor.begin(), anchor.end()),
                  Matrix::diagonal(regularizer_diag)};
    }
  }
  double weight_sum = 0.0;
  for (const auto& init : inits) weight_sum += init.weight;
  for (auto& init : inits) init.weight /= weight_sum;

  return {MixtureOfGaussians(std::move(inits)), static_cast<int>(dead.size())};
}

Vector mog_mode_estimate(const MixtureOfGaussians& mog) {
  int best = 0;
  double best_density = kNegInf;
  for (int c = 0; c < mog.component_count(); ++c) {
    const double value = log_density(mog, mog.mean(c));
    if (value > best_density) {
      best_density = value;
      best = c;
    }
  }
  return mog.mean(best);
}

Vector sample_dirichlet_uniform(int k, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("sample_dirichlet_uniform: k must be >= 1");
  Vector gammas(k);
  double sum = 0.0;
  for (double& g : gammas) {
    g = -std::log(rng.uniform_pos());
    sum += g;
  }
  for (double& g : gammas) g /= sum;
  return gammas;
}

Matrix sample_wishart_identity(int dim, int dof, RngStream& rng) {
  if (dof < dim) throw std::invalid_argument("sample_wishart_identity: dof must be >= dim");
  // Bartlett: A lower-triangular with A_ii^2 ~ chi^2(dof - i) and
  // A_ij ~ N(0,1) below the diagonal; W = A A^T (scale matrix is I).
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const int chi_dof = dof - i;
    double chi_sq = 0.0;
    for (int t = 0; t < chi_dof; ++t) {
      const double z = rng.normal();
      chi_sq += z * z;
    }
    a(i, i) = std::sqrt(chi_sq);
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  Matrix w(dim, dim);
  const auto& k = simd::active_kernels();
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = k.dot(a.row(i), a.row(j), static_cast<std::size_t>(j) + 1);
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

MixtureOfGaussians draw_benchmark_objective(const MogObjectivePrior& prior, RngStream& rng) {
  if (prior.dim < 1 || prior.components < 1 || !(prior.range_scale > 0.0)) {
    throw std::invalid_argument("draw_benchmark_objective: invalid prior");
  }
  const int d = prior.dim;
  const int dof = d + prior.wishart_dof_offset;
  const double mean_std = std::sqrt(prior.range_scale);

  const Vector phi = sample_dirichlet_uniform(prior.components, rng);
  std::vector<MixtureOfGaussians::Init> inits;
  inits.reserve(prior.components);
  for (int c = 0; c < prior.components; ++c) {
    const Matrix precision = sample_wishart_identity(d, dof, rng);
    Matrix covariance = inverse_spd(precision);
    Vector mean(d);
    rng.fill_normal(mean);
    for (double& v : mean) v *= mean_std;
    inits.push_back({phi[c], std::move(mean), std::move(covariance)});
  }
  return MixtureOfGaussians(std::move(inits));
}

}  // namespace pa
