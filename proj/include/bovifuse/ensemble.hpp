#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bovifuse/predictions.hpp"
#include "bovifuse/scores.hpp"

namespace bovifuse {

/// The weight-search lattice. Weights are held as integer multiples of
/// 1/denom so each triple sums to 1 exactly; conversion to doubles happens
/// only at the point of use.
struct WeightGrid {
  int lo_units = 2;    // 0.10 in units of 0.05
  int hi_units = 10;   // 0.50
  int denom = 20;      // unit = 1/20 = 0.05
  std::vector<std::array<int, 3>> points;  // lexicographic order

  std::array<double, 3> weights(size_t i) const;
  static std::array<double, 3> to_weights(const std::array<int, 3>& units, int denom);
};

/// Enumerates every triple (a1,a2,a3) with lo <= ai <= hi and
/// a1+a2+a3 = denom, in lexicographic order. Defaults give the 57-point
/// lattice over [0.10, 0.50] in 0.05 steps.
WeightGrid enumerate_grid(int lo_units = 2, int hi_units = 10, int denom = 20);

/// Convenience for fractional bounds: lo/hi/step are converted to lattice
/// units and must be integer multiples of step.
WeightGrid enumerate_grid_fractional(double lo, double hi, double step);

/// Weighted average of the three model distributions, per id:
///   P = w1*P_vgg16 + w2*P_resnet50 + w3*P_inceptionv3.
/// Logit inputs are softmaxed first. The three id sets must be identical;
/// mismatches raise an error listing the symmetric difference.
std::map<std::string, ProbVector> fuse(const PredictionSet& vgg16,
                                       const PredictionSet& resnet50,
                                       const PredictionSet& inceptionv3,
                                       const std::array<double, 3>& weights);

/// Temperature-scaled softmax, exp(z_c/T) / sum_j exp(z_j/T), computed with
/// max subtraction. T < 1 sharpens, T > 1 softens, argmax is unchanged.
ProbVector temperature_scale(const LogitVector& z, double temperature);

/// Calibrates an already-fused distribution by treating log(max(p,1e-12))
/// as pseudo-logits and rescaling them: with T = 1 this is the identity.
ProbVector calibrate_fused(const ProbVector& fused, double temperature);

std::map<std::string, ProbVector> calibrate_fused(
    const std::map<std::string, ProbVector>& fused, double temperature);

struct GridScore {
  std::array<int, 3> units;
  std::array<double, 3> weights;
  double metric;  // validation accuracy
};

struct GridSearchResult {
  std::array<int, 3> best_units;
  std::array<double, 3> best_weights;
  double best_metric;
  std::vector<GridScore> table;  // one row per lattice point, grid order
};

/// Evaluates validation accuracy at every lattice point and returns the
/// argmax; ties break to the lexicographically smallest triple (the first
/// one in grid order). Calibration is skipped here because argmax, and
/// hence accuracy, is temperature-invariant.
GridSearchResult grid_search_weights(const PredictionSet& vgg16,
                                     const PredictionSet& resnet50,
                                     const PredictionSet& inceptionv3,
                                     const std::map<std::string, ClassLabel>& labels,
                                     const WeightGrid& grid);

/// Table-5 style configuration edit: optionally zero one model's weight
/// (renormalizing the rest) and/or disable calibration (T -> 1).
struct AblationConfig {
  std::optional<ModelId> drop_model;
  bool calibrate = true;
};

FusionConfig apply_ablation(const AblationConfig& ablation, const FusionConfig& base);

/// Picks the temperature minimizing mean validation NLL over the lattice
/// T in [lo, hi] with the given step (defaults 0.5..2.0 by 0.05). Ties
/// break to the smallest T.
double fit_temperature(const std::map<std::string, ProbVector>& fused,
                       const std::map<std::string, ClassLabel>& labels,
                       double lo = 0.5, double hi = 2.0, double step = 0.05);

FusionConfig load_fusion_config(const std::filesystem::path& path);
void save_fusion_config(const FusionConfig& config, const std::filesystem::path& path);

/// Grid-search report CSV: w1,w2,w3,metric.
void write_grid_csv(const GridSearchResult& result, const std::filesystem::path& path);

}  // namespace bovifuse
