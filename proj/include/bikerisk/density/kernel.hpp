#pragma once

namespace bikerisk::density {

/// Isotropic Gaussian kernel parameters. `bandwidth` is the kernel variance
/// in squared degrees.
struct KernelParams {
  double bandwidth = 0.003;
  int dimension = 2;

  void validate() const;
};

/// (2*pi*h)^(-m/2), the kernel value at zero offset.
double kernel_peak(const KernelParams& params);

/// K_h(v) = (2*pi*h)^(-m/2) * exp(-|v|^2 / (2h)) for a 2D offset in degrees.
double kernel(double dlat, double dlon, const KernelParams& params);

}  // namespace bikerisk::density
