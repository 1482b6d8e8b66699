#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "bovifuse/scores.hpp"

namespace bovifuse {

/// Categorical cross-entropy, -sum_c y_c log p_c, with p clamped to 1e-12
/// before the log so a zero-probability target stays finite.
double cross_entropy(const OneHotTarget& y, const ProbVector& p);

struct AdamWConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;  // decoupled
};

/// AdamW with bias-corrected moments and decoupled weight decay:
///   theta' = theta - lr * m_hat / (sqrt(v_hat) + eps) - lr * lambda * theta
class AdamW {
 public:
  AdamW(size_t n_params, AdamWConfig config = {});

  void step(std::vector<double>& params, const std::vector<double>& grads);

  double& learning_rate() { return config_.lr; }
  long steps() const { return t_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

 private:
  AdamWConfig config_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

struct SgdConfig {
  double lr = 0.005;
  double momentum = 0.9;
};

/// Heavy-ball SGD in its literal two-iterate form:
///   theta_{t+1} = theta_t - lr * grad + lr * mu * (theta_t - theta_{t-1})
/// The first step uses theta_{-1} = theta_0.
class SgdMomentum {
 public:
  SgdMomentum(std::vector<double> initial_params, SgdConfig config = {});

  void step(std::vector<double>& params, const std::vector<double>& grads);

  double& learning_rate() { return config_.lr; }
  const std::vector<double>& previous_params() const { return prev_; }

 private:
  SgdConfig config_;
  std::vector<double> prev_;
};

using OptimizerSpec = std::variant<AdamWConfig, SgdConfig>;

/// Epoch budget and callback thresholds for fit(). An epoch counts as an
/// improvement only when validation loss drops by at least min_delta.
struct TrainControl {
  int max_epochs = 200;
  int batch_size = 32;
  double lr_reduce_factor = 0.2;
  int lr_reduce_patience = 10;
  std::optional<int> early_stop_patience = 20;  // nullopt disables early stop
  double min_delta = 1e-6;
  uint64_t seed = 42;
};

struct EpochStats {
  int epoch;  // 1-based
  double train_loss;
  double val_loss;
  double lr;
};

struct FitResult {
  std::vector<double> best_params;
  double best_val_loss;
  int best_epoch;
  std::vector<EpochStats> history;
};

using ValueFn = std::function<double(const std::vector<double>&)>;
using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;
using BatchValueFn =
    std::function<double(const std::vector<double>&, const std::vector<size_t>&)>;
using BatchGradFn = std::function<std::vector<double>(const std::vector<double>&,
                                                      const std::vector<size_t>&)>;

/// A differentiable training objective. When gradient is empty, fit falls
/// back to central finite differences. When the objective decomposes into
/// per-sample terms, set num_samples and the batch callbacks and fit runs
/// seeded mini-batches of control.batch_size instead of full steps.
struct TrainProblem {
  ValueFn train_value;
  GradFn train_gradient;  // optional
  ValueFn validation;

  size_t num_samples = 0;       // 0 => full-batch objective
  BatchValueFn batch_value;     // mean loss over the given sample indices
  BatchGradFn batch_gradient;   // optional; finite differences otherwise
};

/// Central finite differences with step h (default 1e-5).
std::vector<double> central_difference_gradient(const ValueFn& f,
                                                const std::vector<double>& x,
                                                double h = 1e-5);

/// Runs up to control.max_epochs epochs of the optimizer, evaluating the
/// validation objective after each epoch. Learning rate is multiplied by
/// lr_reduce_factor whenever validation fails to improve for
/// lr_reduce_patience consecutive epochs, and training stops once the
/// streak reaches early_stop_patience. Returns the best-validation
/// parameter snapshot and the per-epoch history.
FitResult fit(const TrainProblem& problem, std::vector<double> initial_params,
              const OptimizerSpec& optimizer, const TrainControl& control = {});

/// History CSV: epoch,train_loss,val_loss,lr.
void write_history_csv(const std::vector<EpochStats>& history,
                       const std::filesystem::path& path);

}  // namespace bovifuse
