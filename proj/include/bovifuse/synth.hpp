#pragma once

#include <array>
#include <utility>
#include <vector>

#include "bovifuse/manifest.hpp"
#include "bovifuse/metrics.hpp"
#include "bovifuse/predictions.hpp"

namespace bovifuse {

/// Recipe for desk-scale stand-in predictions: per-class sample counts,
/// one accuracy per model, optional confusable class pairs that wrong
/// answers gravitate toward, and the logit gap between the emitted class
/// and the rest.
struct SyntheticSpec {
  std::array<int, kNumClasses> n_per_class{};
  std::array<double, 3> model_accuracies{0.94, 0.96, 0.98};
  std::vector<std::pair<ClassLabel, ClassLabel>> confusion_bias;
  double score_sharpness = 4.0;
  Split split = Split::Testing;

  void validate() const;
};

struct SynthResult {
  DatasetManifest manifest;                  // true labels, one row per sample
  std::array<PredictionSet, 3> predictions;  // vgg16, resnet50, inceptionv3
};

/// Draws labels and per-model predictions: each model emits the true class
/// with probability equal to its accuracy, otherwise a wrong class (biased
/// toward confusion partners). Scores put logit `score_sharpness` on the
/// emitted class and 0 elsewhere, then softmax, so argmax always equals
/// the emitted class. Deterministic for a given seed.
SynthResult synthesize(const SyntheticSpec& spec, uint64_t seed);

/// Emits predictions that realize `target` exactly: for every cell (t,p)
/// with count k, k samples of true class t on which all three models emit
/// class p. The fused, calibrated argmax then reproduces the matrix.
SynthResult synthesize_from_confusion(const ConfusionMatrix& target,
                                      double score_sharpness = 4.0,
                                      Split split = Split::Testing);

}  // namespace bovifuse
