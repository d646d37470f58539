#include "bikerisk/density/kernel.hpp"

#include "bikerisk/error.hpp"

#include <cmath>
#include <numbers>

namespace bikerisk::density {

void KernelParams::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("kernel bandwidth must be positive");
  }
  if (dimension != 2) {
    throw ValidationError("only two-dimensional kernels are supported");
  }
}

double kernel_peak(const KernelParams& params) {
  return std::pow(2.0 * std::numbers::pi * params.bandwidth, -0.5 * params.dimension);
}

double kernel(double dlat, double dlon, const KernelParams& params) {
  return kernel_peak(params) * std::exp(-(dlat * dlat + dlon * dlon) / (2.0 * params.bandwidth));
}

}  // namespace bikerisk::density
