#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bovifuse/metrics.hpp"

namespace bovifuse {

/// All charts render into a fixed 800x600 viewBox with the plot area
/// spanning x in [90,760] and y in [60,540]; data ranges map linearly onto
/// it (a degenerate range centers the points). Output is deterministic so
/// charts can be byte-compared in tests.

/// Confusion matrix heatmap: shaded 6x6 grid with counts and class names.
std::string svg_confusion_heatmap(const ConfusionMatrix& cm);

/// One-vs-rest ROC curves for all six classes, with a legend of AUCs.
std::string svg_roc_chart(const std::vector<RocCurve>& curves);

/// Line chart with circular data-point markers, used for training curves.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<std::pair<double, double>>& points);

}  // namespace bovifuse
