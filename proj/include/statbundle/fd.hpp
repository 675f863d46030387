#pragma once

// Central finite differences. This is the reference the analytic derivative
// code is tested against, so it depends on nothing but the standard library.

#include <functional>
#include <span>
#include <vector>

namespace statbundle::fd {

struct FDConfig {
  double h = 1e-5;
  /// One level of Richardson extrapolation, (4 D(h/2) - D(h)) / 3.
  bool richardson = false;

  /// Throws ErrorKind::Config unless 0 < h < 1e-2.
  void validate() const;
};

double fd_scalar(const std::function<double(double)>& fn, double t, const FDConfig& cfg = {});

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& fn,
                                std::span<const double> theta, const FDConfig& cfg = {});

std::vector<double> fd_vector_curve(const std::function<std::vector<double>(double)>& fn, double t,
                                    const FDConfig& cfg = {});

}  // namespace statbundle::fd
