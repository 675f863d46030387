#pragma once

// Finite sample spaces, strictly positive densities, and the fibers of the
// statistical bundle over them.
//
// A density q is always taken relative to the reference weights mu of its
// space: the probability of outcome x is q(x) * mu(x). Every object is
// immutable once constructed.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "statbundle/error.hpp"

namespace statbundle {

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kRenormalizeLimit = 1e-6;
inline constexpr double kFiberTol = 1e-12;
/// Smallest density value still regarded as interior.
inline constexpr double kMinDensityValue = 1e-300;

class SampleSpace {
 public:
  /// Throws ErrorKind::InvalidSpace unless size >= 2 and every weight > 0.
  explicit SampleSpace(std::vector<double> weights);

  [[nodiscard]] std::size_t size() const noexcept { return weights_->size(); }
  [[nodiscard]] std::span<const double> weights() const noexcept { return *weights_; }
  [[nodiscard]] double weight(std::size_t x) const { return (*weights_)[x]; }
  [[nodiscard]] double total_mass() const noexcept;

  friend bool operator==(const SampleSpace& a, const SampleSpace& b) noexcept;

 private:
  std::shared_ptr<const std::vector<double>> weights_;
};

SampleSpace make_space(std::vector<double> weights);

class Density {
 public:
  /// Validates positivity and normalization. Drift in (1e-12, 1e-6) is
  /// renormalized away, larger drift throws ErrorKind::Normalization.
  Density(SampleSpace space, std::vector<double> values);

  /// Constant density 1 / mu(Omega).
  static Density uniform(const SampleSpace& space);

  [[nodiscard]] const SampleSpace& space() const noexcept { return space_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t x) const { return values_[x]; }

  /// Probability of outcome x, q(x) * mu(x).
  [[nodiscard]] double mass(std::size_t x) const { return values_[x] * space_.weight(x); }

  friend bool operator==(const Density& a, const Density& b) noexcept {
    return a.space_ == b.space_ && a.values_ == b.values_;
  }

 private:
  SampleSpace space_;
  std::vector<double> values_;
};

Density make_density(const SampleSpace& space, std::vector<double> values);

/// Fiber (exponential) or predual fiber (mixture). In finite dimension both
/// are the same vector space; the tag is carried for readability only and is
/// never checked.
enum class Polarity { Exponential, Mixture };

class FiberVector {
 public:
  /// Throws ErrorKind::NotInFiber if |E_base v| exceeds 1e-12 (scaled by
  /// max(1, E_base|v|)).
  FiberVector(Density base, std::vector<double> values,
              Polarity polarity = Polarity::Exponential);

  static FiberVector zero(const Density& base, Polarity polarity = Polarity::Exponential);

  [[nodiscard]] const Density& base() const noexcept { return base_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t x) const { return values_[x]; }
  [[nodiscard]] Polarity polarity() const noexcept { return polarity_; }

  [[nodiscard]] FiberVector with_polarity(Polarity polarity) const;

  friend FiberVector operator+(const FiberVector& a, const FiberVector& b);
  friend FiberVector operator-(const FiberVector& a, const FiberVector& b);
  friend FiberVector operator*(double scale, const FiberVector& v);
  friend FiberVector operator-(const FiberVector& v) { return -1.0 * v; }

 private:
  struct Unchecked {};
  FiberVector(Unchecked, Density base, std::vector<double> values, Polarity polarity);

  Density base_;
  std::vector<double> values_;
  Polarity polarity_;
};

/// E_q f = sum_x f(x) q(x) mu(x).
double expect(const Density& q, std::span<const double> f);

/// Covariance pairing <w, v>_q = E_q[w v]; both vectors must sit at q.
double pairing(const Density& q, const FiberVector& w, const FiberVector& v);

/// Projection f - E_q f onto the fiber at q.
FiberVector center(const Density& q, std::span<const double> f,
                   Polarity polarity = Polarity::Exponential);

/// exp(g) / sum(exp(g) mu) with g i.i.d. standard normal drawn from a
/// generator seeded with `seed`.
Density random_density(const SampleSpace& space, std::uint64_t seed);

class ProductSpace {
 public:
  ProductSpace(SampleSpace left, SampleSpace right);

  [[nodiscard]] const SampleSpace& left() const noexcept { return left_; }
  [[nodiscard]] const SampleSpace& right() const noexcept { return right_; }
  /// Flattened row-major space with weight mu1(x) * mu2(y) at x * n2 + y.
  [[nodiscard]] const SampleSpace& joint() const noexcept { return joint_; }
  [[nodiscard]] std::size_t rows() const noexcept { return left_.size(); }
  [[nodiscard]] std::size_t cols() const noexcept { return right_.size(); }
  [[nodiscard]] std::size_t index(std::size_t x, std::size_t y) const noexcept {
    return x * right_.size() + y;
  }

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) noexcept {
    return a.left_ == b.left_ && a.right_ == b.right_;
  }

 private:
  SampleSpace left_;
  SampleSpace right_;
  SampleSpace joint_;
};

class JointDensity {
 public:
  /// `values` is row-major, n1 * n2 entries.
  JointDensity(ProductSpace space, std::vector<double> values);
  JointDensity(ProductSpace space, const std::vector<std::vector<double>>& rows);
  /// Wraps a density that already lives on space.joint().
  JointDensity(ProductSpace space, Density flat);

  [[nodiscard]] const ProductSpace& space() const noexcept { return space_; }
  [[nodiscard]] std::size_t rows() const noexcept { return space_.rows(); }
  [[nodiscard]] std::size_t cols() const noexcept { return space_.cols(); }
  [[nodiscard]] double operator()(std::size_t x, std::size_t y) const {
    return flat_[space_.index(x, y)];
  }
  /// The same density viewed on the flattened joint space; fiber vectors at
  /// a joint density are based here.
  [[nodiscard]] const Density& flat() const noexcept { return flat_; }

 private:
  ProductSpace space_;
  Density flat_;
};

/// p1 (x) p2 on the product of their spaces.
JointDensity product(const Density& p1, const Density& p2);

}  // namespace statbundle
