#pragma once

#include <array>

#include "bovifuse/labels.hpp"

namespace bovifuse {

using Vec6 = std::array<double, kNumClasses>;

/// Raw per-class scores. Construction rejects NaN and infinities.
class LogitVector {
 public:
  explicit LogitVector(const Vec6& z);

  const Vec6& values() const { return z_; }
  double operator[](int i) const { return z_[static_cast<size_t>(i)]; }

 private:
  Vec6 z_;
};

/// A categorical distribution over the six classes. Entries are
/// non-negative and sum to 1 within 1e-9 after construction. Sums off by
/// up to 1e-6 (serialization rounding) are silently renormalized; anything
/// further off is rejected.
class ProbVector {
 public:
  explicit ProbVector(const Vec6& p);

  const Vec6& values() const { return p_; }
  double operator[](int i) const { return p_[static_cast<size_t>(i)]; }
  double operator[](ClassLabel c) const { return p_[static_cast<size_t>(c)]; }

  bool operator==(const ProbVector&) const = default;

 private:
  Vec6 p_;
};

/// Indicator vector for the true class: 1 at one index, 0 elsewhere.
class OneHotTarget {
 public:
  explicit OneHotTarget(const Vec6& y);

  ClassLabel label() const { return label_; }
  const Vec6& values() const { return y_; }
  double operator[](int i) const { return y_[static_cast<size_t>(i)]; }

 private:
  Vec6 y_;
  ClassLabel label_;
};

/// Ensemble parameters: one weight per base model (convex, sum 1) plus the
/// softmax temperature used for calibration.
struct FusionConfig {
  std::array<double, 3> weights;
  double temperature;

  /// Validates ranges and renormalizes a sum within 1e-6 of 1.
  static FusionConfig make(const std::array<double, 3>& weights, double temperature);
};

/// Numerically stable softmax (max subtraction before exponentiation).
ProbVector softmax(const LogitVector& z);

/// Index of the maximal entry; ties break to the lowest class index.
ClassLabel argmax_class(const ProbVector& p);

OneHotTarget one_hot(ClassLabel c);

}  // namespace bovifuse
