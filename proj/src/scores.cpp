#include "bovifuse/scores.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bovifuse/errors.hpp"

namespace bovifuse {

namespace {

constexpr double kSumSlack = 1e-6;  // renormalize within this, reject beyond

void require_finite(const Vec6& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ValidationError(std::string(what) + " contains a non-finite entry");
    }
  }
}

}  // namespace

LogitVector::LogitVector(const Vec6& z) : z_(z) {
  require_finite(z_, "logit vector");
}

ProbVector::ProbVector(const Vec6& p) : p_(p) {
  require_finite(p_, "probability vector");
  double sum = 0.0;
  for (double x : p_) {
    if (x < 0.0) throw ValidationError("probability vector has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumSlack) {
    throw ValidationError("probability vector sums to " + std::to_string(sum) +
                          ", expected 1");
  }
  for (double& x : p_) x /= sum;
}

OneHotTarget::OneHotTarget(const Vec6& y) : y_(y), label_(ClassLabel::FmdFoot) {
  int ones = 0;
  for (int i = 0; i < kNumClasses; ++i) {
    double v = y_[static_cast<size_t>(i)];
    if (v == 1.0) {
      ++ones;
      label_ = static_cast<ClassLabel>(i);
    } else if (v != 0.0) {
      throw ValidationError("one-hot target entries must be 0 or 1");
    }
  }
  if (ones != 1) throw ValidationError("one-hot target must have exactly one 1");
}

FusionConfig FusionConfig::make(const std::array<double, 3>& weights,
                                double temperature) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw ValidationError("fusion weights must lie in [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumSlack) {
    throw ValidationError("fusion weights sum to " + std::to_string(sum) +
                          ", expected 1");
  }
  if (!std::isfinite(temperature) || temperature <= 0.0) {
    throw ValidationError("temperature must be positive");
  }
  FusionConfig cfg{weights, temperature};
  for (double& w : cfg.weights) w /= sum;
  return cfg;
}

ProbVector softmax(const LogitVector& z) {
  const Vec6& v = z.values();
  double zmax = *std::max_element(v.begin(), v.end());
  Vec6 e{};
  double sum = 0.0;
  for (size_t i = 0; i < e.size(); ++i) {
    e[i] = std::exp(v[i] - zmax);
    sum += e[i];
  }
  for (double& x : e) x /= sum;
  return ProbVector(e);
}

ClassLabel argmax_class(const ProbVector& p) {
  int best = 0;
  for (int i = 1; i < kNumClasses; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return static_cast<ClassLabel>(best);
}

OneHotTarget one_hot(ClassLabel c) {
  Vec6 y{};
  y[static_cast<size_t>(c)] = 1.0;
  return OneHotTarget(y);
}

}  // namespace bovifuse
