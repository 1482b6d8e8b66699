#include "bovifuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "json.hpp"

namespace bovifuse {

namespace {

double safe_div(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

int64_t ConfusionMatrix::total() const {
  int64_t sum = 0;
  for (int64_t c : counts_) sum += c;
  return sum;
}

int64_t ConfusionMatrix::trace() const {
  int64_t sum = 0;
  for (int i = 0; i < kNumClasses; ++i) sum += at(i, i);
  return sum;
}

std::array<int64_t, kNumClasses> ConfusionMatrix::row_sums() const {
  std::array<int64_t, kNumClasses> rows{};
  for (int t = 0; t < kNumClasses; ++t) {
    for (int p = 0; p < kNumClasses; ++p) rows[static_cast<size_t>(t)] += at(t, p);
  }
  return rows;
}

std::array<int64_t, kNumClasses> ConfusionMatrix::col_sums() const {
  std::array<int64_t, kNumClasses> cols{};
  for (int t = 0; t < kNumClasses; ++t) {
    for (int p = 0; p < kNumClasses; ++p) cols[static_cast<size_t>(p)] += at(t, p);
  }
  return cols;
}

ConfusionMatrix confusion(const std::map<std::string, ClassLabel>& truth,
                          const std::map<std::string, ClassLabel>& predicted) {
  if (truth.empty()) throw ValidationError("confusion: empty label set");
  if (truth.size() != predicted.size()) {
    throw ValidationError("confusion: label and prediction id sets differ in size");
  }
  ConfusionMatrix cm;
  for (const auto& [id, t] : truth) {
    auto it = predicted.find(id);
    if (it == predicted.end()) {
      throw ValidationError("confusion: no prediction for id '" + id + "'");
    }
    ++cm.at(class_index(t), class_index(it->second));
  }
  return cm;
}

std::array<PerClassMetrics, kNumClasses> per_class_table(const ConfusionMatrix& cm) {
  const auto rows = cm.row_sums();
  const auto cols = cm.col_sums();
  const int64_t total = cm.total();

  std::array<PerClassMetrics, kNumClasses> out;
  for (int c = 0; c < kNumClasses; ++c) {
    const size_t ci = static_cast<size_t>(c);
    const int64_t tp = cm.at(c, c);
    const int64_t fp = cols[ci] - tp;
    const int64_t fn = rows[ci] - tp;
    const int64_t tn = total - rows[ci] - cols[ci] + tp;

    PerClassMetrics& m = out[ci];
    m.support = rows[ci];
    m.precision_defined = (tp + fp) > 0;
    m.recall_defined = rows[ci] > 0;
    m.precision = safe_div(tp, tp + fp);
    m.recall = safe_div(tp, tp + fn);
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.specificity = safe_div(tn, tn + fp);
  }
  return out;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  const int64_t total = cm.total();
  if (total < 1) throw ValidationError("compute_metrics: empty confusion matrix");
  const auto rows = cm.row_sums();
  const auto cols = cm.col_sums();
  const int64_t correct = cm.trace();

  MetricsReport report;
  report.per_class = per_class_table(cm);
  report.accuracy = safe_div(correct, total);

  for (const PerClassMetrics& m : report.per_class) {
    report.macro_precision += m.precision;
    report.macro_recall += m.recall;
    report.macro_f1 += m.f1;
    report.macro_specificity += m.specificity;
  }
  report.macro_precision /= kNumClasses;
  report.macro_recall /= kNumClasses;
  report.macro_f1 /= kNumClasses;
  report.macro_specificity /= kNumClasses;
  report.balanced_accuracy = report.macro_recall;
  report.g_mean = std::sqrt(report.macro_recall * report.macro_specificity);

  // Cohen's kappa with expected agreement from the marginal products.
  int64_t marginal = 0, sq_rows = 0, sq_cols = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const size_t ci = static_cast<size_t>(c);
    marginal += rows[ci] * cols[ci];
    sq_rows += rows[ci] * rows[ci];
    sq_cols += cols[ci] * cols[ci];
  }
  const double p_o = report.accuracy;
  const double p_e = static_cast<double>(marginal) /
                     (static_cast<double>(total) * static_cast<double>(total));
  report.cohens_kappa = (1.0 - p_e) == 0.0 ? 0.0 : (p_o - p_e) / (1.0 - p_e);

  // Generalized (multiclass) Matthews correlation.
  const double s = static_cast<double>(total);
  const double mcc_num = static_cast<double>(correct) * s - static_cast<double>(marginal);
  const double mcc_den = std::sqrt((s * s - static_cast<double>(sq_cols)) *
                                   (s * s - static_cast<double>(sq_rows)));
  report.mcc = mcc_den == 0.0 ? 0.0 : mcc_num / mcc_den;
  return report;
}

RocCurve roc_curve(const std::map<std::string, ClassLabel>& truth,
                   const std::map<std::string, ProbVector>& scores, ClassLabel cls) {
  if (truth.size() != scores.size()) {
    throw ValidationError("roc_curve: label and score id sets differ in size");
  }
  struct Entry {
    double score;
    bool positive;
  };
  std::vector<Entry> entries;
  entries.reserve(truth.size());
  int64_t positives = 0;
  for (const auto& [id, t] : truth) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      throw ValidationError("roc_curve: no score row for id '" + id + "'");
    }
    bool pos = t == cls;
    positives += pos ? 1 : 0;
    entries.push_back({it->second[cls], pos});
  }
  const int64_t negatives = static_cast<int64_t>(entries.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError(std::string("roc_curve: class ") +
                          std::string(class_name(cls)) +
                          (positives == 0 ? " has no positive samples"
                                          : " has no negative samples"));
  }

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.score > b.score; });

  RocCurve curve;
  curve.cls = cls;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

  int64_t tp = 0, fp = 0;
  int64_t trapezoid_twice = 0;  // sum of dFP * (TP_prev + TP_new), exact
  size_t i = 0;
  while (i < entries.size()) {
    const double threshold = entries[i].score;
    int64_t group_tp = 0, group_fp = 0;
    while (i < entries.size() && entries[i].score == threshold) {
      (entries[i].positive ? group_tp : group_fp) += 1;
      ++i;
    }
    trapezoid_twice += group_fp * (tp + (tp + group_tp));
    tp += group_tp;
    fp += group_fp;
    curve.points.push_back({threshold,
                            static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
  }
  curve.auc = static_cast<double>(trapezoid_twice) /
              (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
  return curve;
}

double macro_auc(const std::map<std::string, ClassLabel>& truth,
                 const std::map<std::string, ProbVector>& scores) {
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    sum += roc_curve(truth, scores, static_cast<ClassLabel>(c)).auc;
  }
  return sum / kNumClasses;
}

// --- report files ---

namespace {

std::string flags_for(const PerClassMetrics& m) {
  std::string flags;
  if (!m.precision_defined) flags = "undefined_precision";
  if (!m.recall_defined) {
    if (!flags.empty()) flags += ";";
    flags += "undefined_recall";
  }
  return flags;
}

}  // namespace

void write_metrics_json(const MetricsReport& report, const std::filesystem::path& path) {
  nlohmann::json per_class = nlohmann::json::array();
  for (int c = 0; c < kNumClasses; ++c) {
    const PerClassMetrics& m = report.per_class[static_cast<size_t>(c)];
    nlohmann::json row{{"class", std::string(class_name(static_cast<ClassLabel>(c)))},
                       {"precision", round6(m.precision)},
                       {"recall", round6(m.recall)},
                       {"f1", round6(m.f1)},
                       {"specificity", round6(m.specificity)},
                       {"support", m.support}};
    std::string flags = flags_for(m);
    if (!flags.empty()) row["flags"] = flags;
    per_class.push_back(std::move(row));
  }
  nlohmann::json doc{
      {"accuracy", round6(report.accuracy)},
      {"macro_precision", round6(report.macro_precision)},
      {"macro_recall", round6(report.macro_recall)},
      {"macro_f1", round6(report.macro_f1)},
      {"macro_auc_roc",
       report.macro_auc_roc ? nlohmann::json(round6(*report.macro_auc_roc))
                            : nlohmann::json(nullptr)},
      {"cohens_kappa", round6(report.cohens_kappa)},
      {"balanced_accuracy", round6(report.balanced_accuracy)},
      {"mcc", round6(report.mcc)},
      {"macro_specificity", round6(report.macro_specificity)},
      {"g_mean", round6(report.g_mean)},
      {"per_class", std::move(per_class)}};
  write_file_atomic(path, doc.dump(2) + "\n");
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "class";
  for (auto name : kClassNames) out << ',' << name;
  out << "\n";
  for (int t = 0; t < kNumClasses; ++t) {
    out << class_name(static_cast<ClassLabel>(t));
    for (int p = 0; p < kNumClasses; ++p) out << ',' << cm.at(t, p);
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

ConfusionMatrix read_confusion_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.filename().string(), "", "empty file");
  ConfusionMatrix cm;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= kNumClasses) {
      throw ParseError(path.filename().string(), "", "too many matrix rows");
    }
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    auto cls = parse_class(cell);
    if (!cls || class_index(*cls) != row) {
      throw ParseError(path.filename().string(), "class",
                       "row " + std::to_string(row) + " must be labeled '" +
                           std::string(kClassNames[static_cast<size_t>(row)]) + "'");
    }
    for (int p = 0; p < kNumClasses; ++p) {
      if (!std::getline(cells, cell, ',')) {
        throw ParseError(path.filename().string(), "", "short matrix row");
      }
      try {
        size_t used = 0;
        long long v = std::stoll(cell, &used);
        if (used != cell.size() || v < 0) throw std::invalid_argument(cell);
        cm.at(row, p) = v;
      } catch (const std::exception&) {
        throw ParseError(path.filename().string(), "",
                         "not a non-negative integer: '" + cell + "'");
      }
    }
    ++row;
  }
  if (row != kNumClasses) {
    throw ParseError(path.filename().string(), "", "expected 6 matrix rows");
  }
  return cm;
}

void write_per_class_csv(const std::array<PerClassMetrics, kNumClasses>& rows,
                         const std::filesystem::path& path) {
  std::ostringstream out;
  out << "class,precision,recall,f1,specificity,support,flags\n";
  char buf[160];
  for (int c = 0; c < kNumClasses; ++c) {
    const PerClassMetrics& m = rows[static_cast<size_t>(c)];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%lld,%s\n",
                  std::string(class_name(static_cast<ClassLabel>(c))).c_str(),
                  m.precision, m.recall, m.f1, m.specificity,
                  static_cast<long long>(m.support), flags_for(m).c_str());
    out << buf;
  }
  write_file_atomic(path, out.str());
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "threshold,fpr,tpr\n";
  char buf[120];
  for (const RocPoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.6f,%.6f\n", p.threshold, p.fpr, p.tpr);
    out << buf;
  }
  write_file_atomic(path, out.str());
}

}  // namespace bovifuse
