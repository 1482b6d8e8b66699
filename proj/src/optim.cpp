#include "bovifuse/optim.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "bovifuse/rng.hpp"

namespace bovifuse {

namespace {

void require_finite_grads(const std::vector<double>& grads) {
  for (double g : grads) {
    if (!std::isfinite(g)) throw ValidationError("non-finite gradient");
  }
}

void require_arity(size_t params, size_t grads) {
  if (params != grads) {
    throw ValidationError("parameter/gradient arity mismatch");
  }
}

}  // namespace

double cross_entropy(const OneHotTarget& y, const ProbVector& p) {
  double loss = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (y[c] != 0.0) {
      loss -= y[c] * std::log(std::max(p[c], 1e-12));
    }
  }
  return loss;
}

AdamW::AdamW(size_t n_params, AdamWConfig config)
    : config_(config), m_(n_params, 0.0), v_(n_params, 0.0) {}

void AdamW::step(std::vector<double>& params, const std::vector<double>& grads) {
  require_arity(params.size(), grads.size());
  require_arity(params.size(), m_.size());
  require_finite_grads(grads);
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double m_corr = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double v_corr = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / m_corr;
    const double v_hat = v_[i] / v_corr;
    const double theta = params[i];
    params[i] = theta - config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps) -
                config_.lr * config_.weight_decay * theta;
  }
}

SgdMomentum::SgdMomentum(std::vector<double> initial_params, SgdConfig config)
    : config_(config), prev_(std::move(initial_params)) {}

void SgdMomentum::step(std::vector<double>& params, const std::vector<double>& grads) {
  require_arity(params.size(), grads.size());
  require_arity(params.size(), prev_.size());
  require_finite_grads(grads);
  for (size_t i = 0; i < params.size(); ++i) {
    const double theta = params[i];
    params[i] = theta - config_.lr * grads[i] +
                config_.lr * config_.momentum * (theta - prev_[i]);
    prev_[i] = theta;
  }
}

std::vector<double> central_difference_gradient(const ValueFn& f,
                                                const std::vector<double>& x,
                                                double h) {
  std::vector<double> grad(x.size());
  std::vector<double> probe = x;
  for (size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    double up = f(probe);
    probe[i] = x[i] - h;
    double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

namespace {

class OptimizerBox {
 public:
  OptimizerBox(const OptimizerSpec& spec, const std::vector<double>& initial) {
    if (std::holds_alternative<AdamWConfig>(spec)) {
      impl_.emplace<AdamW>(initial.size(), std::get<AdamWConfig>(spec));
    } else {
      impl_.emplace<SgdMomentum>(initial, std::get<SgdConfig>(spec));
    }
  }

  void step(std::vector<double>& params, const std::vector<double>& grads) {
    std::visit([&](auto& opt) { opt.step(params, grads); }, impl_);
  }

  double& learning_rate() {
    return std::visit([](auto& opt) -> double& { return opt.learning_rate(); }, impl_);
  }

 private:
  std::variant<AdamW, SgdMomentum> impl_{AdamW(0)};
};

double checked(double value, const char* what, int epoch) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(what) + " returned non-finite value at epoch " +
                          std::to_string(epoch));
  }
  return value;
}

}  // namespace

FitResult fit(const TrainProblem& problem, std::vector<double> initial_params,
              const OptimizerSpec& optimizer, const TrainControl& control) {
  if (!problem.train_value && !(problem.num_samples > 0 && problem.batch_value)) {
    throw ValidationError("fit: no training objective provided");
  }
  if (!problem.validation) throw ValidationError("fit: no validation objective");
  if (control.max_epochs < 1) throw ValidationError("fit: max_epochs must be >= 1");
  if (control.lr_reduce_patience < 1 ||
      !(control.lr_reduce_factor > 0.0 && control.lr_reduce_factor < 1.0)) {
    throw ValidationError("fit: invalid learning-rate schedule");
  }
  if (control.early_stop_patience && *control.early_stop_patience < 1) {
    throw ValidationError("fit: early_stop_patience must be >= 1");
  }

  const bool minibatched = problem.num_samples > 0 && problem.batch_value;
  OptimizerBox opt(optimizer, initial_params);
  Rng batch_rng = Rng(control.seed).substream("batches");

  std::vector<double> params = std::move(initial_params);
  FitResult result;
  result.best_params = params;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  result.best_epoch = 0;

  std::vector<size_t> indices(problem.num_samples);
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;

  int stale_epochs = 0;
  for (int epoch = 1; epoch <= control.max_epochs; ++epoch) {
    const double epoch_lr = opt.learning_rate();
    double train_loss = 0.0;

    if (minibatched) {
      fisher_yates_shuffle(indices, batch_rng);
      double loss_sum = 0.0;
      size_t seen = 0;
      const size_t bs = static_cast<size_t>(control.batch_size);
      for (size_t start = 0; start < indices.size(); start += bs) {
        size_t end = std::min(indices.size(), start + bs);
        std::vector<size_t> batch(indices.begin() + static_cast<long>(start),
                                  indices.begin() + static_cast<long>(end));
        double batch_loss =
            checked(problem.batch_value(params, batch), "training objective", epoch);
        std::vector<double> grads =
            problem.batch_gradient
                ? problem.batch_gradient(params, batch)
                : central_difference_gradient(
                      [&](const std::vector<double>& p) {
                        return problem.batch_value(p, batch);
                      },
                      params);
        opt.step(params, grads);
        loss_sum += batch_loss * static_cast<double>(batch.size());
        seen += batch.size();
      }
      train_loss = loss_sum / static_cast<double>(seen);
    } else {
      train_loss = checked(problem.train_value(params), "training objective", epoch);
      std::vector<double> grads =
          problem.train_gradient
              ? problem.train_gradient(params)
              : central_difference_gradient(problem.train_value, params);
      opt.step(params, grads);
    }

    const double val_loss = checked(problem.validation(params), "validation objective", epoch);
    result.history.push_back({epoch, train_loss, val_loss, epoch_lr});

    if (result.best_val_loss - val_loss >= control.min_delta) {
      result.best_val_loss = val_loss;
      result.best_params = params;
      result.best_epoch = epoch;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
      if (stale_epochs % control.lr_reduce_patience == 0) {
        opt.learning_rate() *= control.lr_reduce_factor;
      }
      if (control.early_stop_patience && stale_epochs >= *control.early_stop_patience) {
        break;
      }
    }
  }
  return result;
}

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::filesystem::path& path) {
  std::ostringstream out;
  out << "epoch,train_loss,val_loss,lr\n";
  char buf[96];
  for (const auto& row : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g\n", row.epoch,
                  row.train_loss, row.val_loss, row.lr);
    out << buf;
  }
  write_file_atomic(path, out.str());
}

}  // namespace bovifuse
