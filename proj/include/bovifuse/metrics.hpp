#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bovifuse/scores.hpp"

namespace bovifuse {

/// 6x6 count matrix; rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  int64_t& at(int true_class, int predicted_class) {
    return counts_[index(true_class, predicted_class)];
  }
  int64_t at(int true_class, int predicted_class) const {
    return counts_[index(true_class, predicted_class)];
  }

  int64_t total() const;
  int64_t trace() const;
  std::array<int64_t, kNumClasses> row_sums() const;  // per-class support
  std::array<int64_t, kNumClasses> col_sums() const;  // per-class predictions

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  static size_t index(int t, int p) {
    return static_cast<size_t>(t) * kNumClasses + static_cast<size_t>(p);
  }
  std::array<int64_t, kNumClasses * kNumClasses> counts_{};
};

/// Tallies counts[true][predicted] over two id-aligned label maps.
/// The id sets must match exactly and be non-empty.
ConfusionMatrix confusion(const std::map<std::string, ClassLabel>& truth,
                          const std::map<std::string, ClassLabel>& predicted);

struct PerClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double specificity = 0.0;
  int64_t support = 0;
  /// False when the denominator was zero and the value defaulted to 0.
  bool precision_defined = true;
  bool recall_defined = true;
};

struct MetricsReport {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> macro_auc_roc;  // needs scores, not just counts
  double cohens_kappa = 0.0;
  double balanced_accuracy = 0.0;  // identical to macro_recall by definition
  double mcc = 0.0;
  double macro_specificity = 0.0;
  double g_mean = 0.0;  // sqrt(macro_recall * macro_specificity)
  std::array<PerClassMetrics, kNumClasses> per_class;
};

/// All threshold-free metrics from a confusion matrix. Macro averages are
/// unweighted means over the six classes. Zero denominators yield 0 with
/// the corresponding *_defined flag cleared.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

/// The per-class rows alone (same values as MetricsReport.per_class).
std::array<PerClassMetrics, kNumClasses> per_class_table(const ConfusionMatrix& cm);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

struct RocCurve {
  ClassLabel cls;
  std::vector<RocPoint> points;  // starts at (0,0), ends at (1,1)
  double auc;                    // trapezoidal
};

/// One-vs-rest ROC for `cls`, using scores[id][cls] as the positive-class
/// score. Thresholds sweep the distinct scores in descending order with a
/// leading point pinned at (0,0); tied scores form one group. Errors if the
/// class has no positives or no negatives.
RocCurve roc_curve(const std::map<std::string, ClassLabel>& truth,
                   const std::map<std::string, ProbVector>& scores, ClassLabel cls);

/// Unweighted mean of the six one-vs-rest AUCs.
double macro_auc(const std::map<std::string, ClassLabel>& truth,
                 const std::map<std::string, ProbVector>& scores);

// --- report files ---

/// metrics.json with all ten metrics plus per-class rows, 6 decimal places.
void write_metrics_json(const MetricsReport& report, const std::filesystem::path& path);

/// 6x6 integer grid with a class-name header row and column.
void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path);
ConfusionMatrix read_confusion_csv(const std::filesystem::path& path);

/// class,precision,recall,f1,specificity,support,flags
void write_per_class_csv(const std::array<PerClassMetrics, kNumClasses>& rows,
                         const std::filesystem::path& path);

/// threshold,fpr,tpr rows for one class.
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);

}  // namespace bovifuse
