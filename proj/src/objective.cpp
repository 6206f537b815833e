#include "pa/objective.hpp"

#include <memory>

#include "pa/simd/kernels.hpp"

namespace pa {

ObjectiveSpec make_quadratic_objective(int dim) {
  return ObjectiveSpec(dim, [](std::span<const double> x) {
    return -0.5 * simd::dot(x, x);
  });
}

ObjectiveSpec make_mog_objective(MixtureOfGaussians mog) {
  auto shared = std::make_shared<MixtureOfGaussians>(std::move(mog));
  const int dim = shared->dim();
  return ObjectiveSpec(dim, [shared](std::span<const double> x) {
    return log_density(*shared, x);
  });
}

}  // namespace pa
