#include "statbundle/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace statbundle {

namespace {

void require_size(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": expected " << expected << " entries, got " << got;
    throw Error(ErrorKind::SizeMismatch, os.str());
  }
}

double weighted_sum(const SampleSpace& space, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) s += f[x] * space.weight(x);
  return s;
}

}  // namespace

SampleSpace::SampleSpace(std::vector<double> weights) {
  if (weights.size() < 2) {
    throw Error(ErrorKind::InvalidSpace, "sample space needs at least 2 outcomes, got " +
                                             std::to_string(weights.size()));
  }
  for (std::size_t x = 0; x < weights.size(); ++x) {
    if (!std::isfinite(weights[x]) || weights[x] <= 0.0) {
      std::ostringstream os;
      os << "reference weight at index " << x << " is " << weights[x] << "; must be > 0";
      throw Error(ErrorKind::InvalidSpace, os.str());
    }
  }
  weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
}

double SampleSpace::total_mass() const noexcept {
  return std::accumulate(weights_->begin(), weights_->end(), 0.0);
}

bool operator==(const SampleSpace& a, const SampleSpace& b) noexcept {
  return a.weights_ == b.weights_ || *a.weights_ == *b.weights_;
}

SampleSpace make_space(std::vector<double> weights) { return SampleSpace(std::move(weights)); }

Density::Density(SampleSpace space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  require_size(space_.size(), values_.size(), "density");
  for (std::size_t x = 0; x < values_.size(); ++x) {
    if (!std::isfinite(values_[x])) {
      std::ostringstream os;
      os << "density value at index " << x << " is not finite";
      throw Error(ErrorKind::NonFinite, os.str());
    }
    if (values_[x] < kMinDensityValue) {
      std::ostringstream os;
      os << "density value at index " << x << " is " << values_[x]
         << "; densities must be strictly positive";
      throw Error(ErrorKind::Boundary, os.str());
    }
  }
  const double total = weighted_sum(space_, values_);
  const double drift = std::abs(total - 1.0);
  if (drift > kNormalizationTol) {
    if (drift >= kRenormalizeLimit) {
      std::ostringstream os;
      os.precision(17);
      os << "density integrates to " << total << " against the reference weights";
      throw Error(ErrorKind::Normalization, os.str());
    }
    for (double& v : values_) v /= total;
  }
}

Density Density::uniform(const SampleSpace& space) {
  return Density(space, std::vector<double>(space.size(), 1.0 / space.total_mass()));
}

Density make_density(const SampleSpace& space, std::vector<double> values) {
  return Density(space, std::move(values));
}

FiberVector::FiberVector(Density base, std::vector<double> values, Polarity polarity)
    : base_(std::move(base)), values_(std::move(values)), polarity_(polarity) {
  require_size(base_.size(), values_.size(), "fiber vector");
  double mean = 0.0;
  double scale = 0.0;
  for (std::size_t x = 0; x < values_.size(); ++x) {
    if (!std::isfinite(values_[x])) {
      throw Error(ErrorKind::NonFinite,
                  "fiber vector value at index " + std::to_string(x) + " is not finite");
    }
    mean += values_[x] * base_.mass(x);
    scale += std::abs(values_[x]) * base_.mass(x);
  }
  if (std::abs(mean) > kFiberTol * std::max(1.0, scale)) {
    std::ostringstream os;
    os.precision(17);
    os << "vector has expectation " << mean << " under its base density";
    throw Error(ErrorKind::NotInFiber, os.str());
  }
}

FiberVector::FiberVector(Unchecked, Density base, std::vector<double> values, Polarity polarity)
    : base_(std::move(base)), values_(std::move(values)), polarity_(polarity) {}

FiberVector FiberVector::zero(const Density& base, Polarity polarity) {
  return FiberVector(Unchecked{}, base, std::vector<double>(base.size(), 0.0), polarity);
}

FiberVector FiberVector::with_polarity(Polarity polarity) const {
  return FiberVector(Unchecked{}, base_, values_, polarity);
}

namespace {

void require_same_base(const FiberVector& a, const FiberVector& b) {
  if (!(a.base() == b.base())) {
    throw Error(ErrorKind::BaseMismatch, "fiber vectors are attached to different densities");
  }
}

}  // namespace

FiberVector operator+(const FiberVector& a, const FiberVector& b) {
  require_same_base(a, b);
  std::vector<double> out(a.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = a.values_[x] + b.values_[x];
  return FiberVector(FiberVector::Unchecked{}, a.base_, std::move(out), a.polarity_);
}

FiberVector operator-(const FiberVector& a, const FiberVector& b) {
  require_same_base(a, b);
  std::vector<double> out(a.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = a.values_[x] - b.values_[x];
  return FiberVector(FiberVector::Unchecked{}, a.base_, std::move(out), a.polarity_);
}

FiberVector operator*(double scale, const FiberVector& v) {
  std::vector<double> out(v.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = scale * v.values_[x];
  return FiberVector(FiberVector::Unchecked{}, v.base_, std::move(out), v.polarity_);
}

double expect(const Density& q, std::span<const double> f) {
  require_size(q.size(), f.size(), "expectation");
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) s += f[x] * q.mass(x);
  return s;
}

double pairing(const Density& q, const FiberVector& w, const FiberVector& v) {
  if (!(w.base() == q) || !(v.base() == q)) {
    throw Error(ErrorKind::BaseMismatch, "pairing: both vectors must be based at q");
  }
  double s = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) s += w[x] * v[x] * q.mass(x);
  return s;
}

FiberVector center(const Density& q, std::span<const double> f, Polarity polarity) {
  const double mean = expect(q, f);
  std::vector<double> out(f.begin(), f.end());
  for (double& v : out) v -= mean;
  return FiberVector(q, std::move(out), polarity);
}

Density random_density(const SampleSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(space.size());
  for (double& v : values) v = std::exp(normal(rng));
  const double total = weighted_sum(space, values);
  for (double& v : values) v /= total;
  return Density(space, std::move(values));
}

namespace {

SampleSpace joint_space(const SampleSpace& left, const SampleSpace& right) {
  std::vector<double> w;
  w.reserve(left.size() * right.size());
  for (std::size_t x = 0; x < left.size(); ++x) {
    for (std::size_t y = 0; y < right.size(); ++y) w.push_back(left.weight(x) * right.weight(y));
  }
  return SampleSpace(std::move(w));
}

}  // namespace

ProductSpace::ProductSpace(SampleSpace left, SampleSpace right)
    : left_(std::move(left)), right_(std::move(right)), joint_(joint_space(left_, right_)) {}

JointDensity::JointDensity(ProductSpace space, std::vector<double> values)
    : space_(std::move(space)), flat_(space_.joint(), std::move(values)) {}

namespace {

std::vector<double> flatten(const ProductSpace& space, const std::vector<std::vector<double>>& rows) {
  require_size(space.rows(), rows.size(), "joint density rows");
  std::vector<double> flat;
  flat.reserve(space.rows() * space.cols());
  for (const auto& row : rows) {
    require_size(space.cols(), row.size(), "joint density row");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

}  // namespace

JointDensity::JointDensity(ProductSpace space, const std::vector<std::vector<double>>& rows)
    : JointDensity(space, flatten(space, rows)) {}

JointDensity::JointDensity(ProductSpace space, Density flat)
    : space_(std::move(space)), flat_(std::move(flat)) {
  if (!(flat_.space() == space_.joint())) {
    throw Error(ErrorKind::SpaceMismatch, "density does not live on the joint space");
  }
}

JointDensity product(const Density& p1, const Density& p2) {
  ProductSpace space(p1.space(), p2.space());
  std::vector<double> values;
  values.reserve(p1.size() * p2.size());
  for (std::size_t x = 0; x < p1.size(); ++x) {
    for (std::size_t y = 0; y < p2.size(); ++y) values.push_back(p1[x] * p2[y]);
  }
  return JointDensity(std::move(space), std::move(values));
}

}  // namespace statbundle
