#include "statbundle/fd.hpp"

#include <cmath>
#include <sstream>

#include "statbundle/error.hpp"

namespace statbundle::fd {

namespace {

double checked(double value, double at) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "finite-difference probe at " << at << " returned a non-finite value";
    throw Error(ErrorKind::NonFinite, os.str());
  }
  return value;
}

std::vector<double> checked(std::vector<double> values, double at) {
  for (double v : values) checked(v, at);
  return values;
}

double central(const std::function<double(double)>& fn, double t, double h) {
  return (checked(fn(t + h), t + h) - checked(fn(t - h), t - h)) / (2.0 * h);
}

std::vector<double> central(const std::function<std::vector<double>(double)>& fn, double t,
                            double h) {
  const std::vector<double> ahead = checked(fn(t + h), t + h);
  const std::vector<double> behind = checked(fn(t - h), t - h);
  if (ahead.size() != behind.size()) {
    throw Error(ErrorKind::SizeMismatch, "curve changed length between probes");
  }
  std::vector<double> out(ahead.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (ahead[i] - behind[i]) / (2.0 * h);
  return out;
}

}  // namespace

void FDConfig::validate() const {
  if (!(h > 0.0 && h < 1e-2)) {
    std::ostringstream os;
    os << "finite-difference step must lie in (0, 1e-2), got " << h;
    throw Error(ErrorKind::Config, os.str());
  }
}

double fd_scalar(const std::function<double(double)>& fn, double t, const FDConfig& cfg) {
  cfg.validate();
  const double coarse = central(fn, t, cfg.h);
  if (!cfg.richardson) return coarse;
  const double fine = central(fn, t, 0.5 * cfg.h);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& fn,
                                std::span<const double> theta, const FDConfig& cfg) {
  cfg.validate();
  std::vector<double> probe(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const auto along = [&](double s) {
      probe[j] = s;
      const double value = fn(probe);
      probe[j] = theta[j];
      return value;
    };
    grad[j] = fd_scalar(along, theta[j], cfg);
  }
  return grad;
}

std::vector<double> fd_vector_curve(const std::function<std::vector<double>(double)>& fn, double t,
                                    const FDConfig& cfg) {
  cfg.validate();
  std::vector<double> coarse = central(fn, t, cfg.h);
  if (!cfg.richardson) return coarse;
  const std::vector<double> fine = central(fn, t, 0.5 * cfg.h);
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return coarse;
}

}  // namespace statbundle::fd
