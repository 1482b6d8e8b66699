#include "bovifuse/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "json.hpp"

namespace bovifuse {

namespace {

void check_same_ids(const std::map<std::string, Vec6>& a,
                    const std::map<std::string, Vec6>& b, const char* a_name,
                    const char* b_name) {
  std::vector<std::string> only_a, only_b;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      only_a.push_back(ia->first);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      only_b.push_back(ib->first);
      ++ib;
    } else {
      ++ia;
      ++ib;
    }
  }
  if (only_a.empty() && only_b.empty()) return;
  std::ostringstream msg;
  msg << "prediction id sets differ;";
  auto list = [&msg](const char* name, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    msg << " only in " << name << " (" << ids.size() << "):";
    for (size_t i = 0; i < ids.size() && i < 10; ++i) msg << " " << ids[i];
    if (ids.size() > 10) msg << " ...";
  };
  list(a_name, only_a);
  list(b_name, only_b);
  throw ValidationError(msg.str());
}

Vec6 to_prob_values(const Vec6& scores, ScoreKind kind) {
  if (kind == ScoreKind::Probs) return ProbVector(scores).values();
  return softmax(LogitVector(scores)).values();
}

}  // namespace

std::array<double, 3> WeightGrid::to_weights(const std::array<int, 3>& units, int denom) {
  return {static_cast<double>(units[0]) / denom, static_cast<double>(units[1]) / denom,
          static_cast<double>(units[2]) / denom};
}

std::array<double, 3> WeightGrid::weights(size_t i) const {
  return to_weights(points.at(i), denom);
}

WeightGrid enumerate_grid(int lo_units, int hi_units, int denom) {
  if (denom < 1 || lo_units < 0 || hi_units < lo_units || hi_units > denom) {
    throw ValidationError("invalid weight grid bounds");
  }
  WeightGrid grid;
  grid.lo_units = lo_units;
  grid.hi_units = hi_units;
  grid.denom = denom;
  for (int a = lo_units; a <= hi_units; ++a) {
    for (int b = lo_units; b <= hi_units; ++b) {
      int c = denom - a - b;
      if (c >= lo_units && c <= hi_units) grid.points.push_back({a, b, c});
    }
  }
  if (grid.points.empty()) throw ValidationError("weight grid is empty");
  return grid;
}

WeightGrid enumerate_grid_fractional(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  double denom_d = 1.0 / step;
  int denom = static_cast<int>(std::lround(denom_d));
  auto to_units = [&](double v, const char* what) {
    double u = v / step;
    int units = static_cast<int>(std::lround(u));
    if (std::abs(u - units) > 1e-9) {
      throw ValidationError(std::string(what) + " is not a multiple of the grid step");
    }
    return units;
  };
  if (std::abs(denom_d - denom) > 1e-9) {
    throw ValidationError("grid step must divide 1 evenly");
  }
  return enumerate_grid(to_units(lo, "grid lo"), to_units(hi, "grid hi"), denom);
}

std::map<std::string, ProbVector> fuse(const PredictionSet& vgg16,
                                       const PredictionSet& resnet50,
                                       const PredictionSet& inceptionv3,
                                       const std::array<double, 3>& weights) {
  FusionConfig check = FusionConfig::make(weights, 1.0);
  check_same_ids(vgg16.rows, resnet50.rows, "vgg16", "resnet50");
  check_same_ids(vgg16.rows, inceptionv3.rows, "vgg16", "inceptionv3");

  const std::array<const PredictionSet*, 3> models = {&vgg16, &resnet50, &inceptionv3};
  std::map<std::string, ProbVector> out;
  for (const auto& [id, first_scores] : vgg16.rows) {
    Vec6 acc{};
    for (size_t m = 0; m < models.size(); ++m) {
      Vec6 p = to_prob_values(models[m]->rows.at(id), models[m]->kind);
      for (size_t c = 0; c < acc.size(); ++c) acc[c] += check.weights[m] * p[c];
    }
    out.emplace(id, ProbVector(acc));
  }
  return out;
}

ProbVector temperature_scale(const LogitVector& z, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be positive");
  }
  Vec6 scaled{};
  for (int c = 0; c < kNumClasses; ++c) scaled[static_cast<size_t>(c)] = z[c] / temperature;
  return softmax(LogitVector(scaled));
}

ProbVector calibrate_fused(const ProbVector& fused, double temperature) {
  Vec6 pseudo{};
  for (int c = 0; c < kNumClasses; ++c) {
    pseudo[static_cast<size_t>(c)] = std::log(std::max(fused[c], 1e-12));
  }
  return temperature_scale(LogitVector(pseudo), temperature);
}

std::map<std::string, ProbVector> calibrate_fused(
    const std::map<std::string, ProbVector>& fused, double temperature) {
  std::map<std::string, ProbVector> out;
  for (const auto& [id, p] : fused) out.emplace(id, calibrate_fused(p, temperature));
  return out;
}

GridSearchResult grid_search_weights(const PredictionSet& vgg16,
                                     const PredictionSet& resnet50,
                                     const PredictionSet& inceptionv3,
                                     const std::map<std::string, ClassLabel>& labels,
                                     const WeightGrid& grid) {
  if (labels.empty()) throw ValidationError("grid search requires a non-empty validation set");
  check_same_ids(vgg16.rows, resnet50.rows, "vgg16", "resnet50");
  check_same_ids(vgg16.rows, inceptionv3.rows, "vgg16", "inceptionv3");

  // Convert once; every lattice point reuses the same probability rows.
  struct Row {
    std::array<Vec6, 3> probs;
    ClassLabel truth;
  };
  std::vector<Row> rows;
  rows.reserve(labels.size());
  for (const auto& [id, truth] : labels) {
    auto iv = vgg16.rows.find(id);
    if (iv == vgg16.rows.end()) {
      throw ValidationError("label id '" + id + "' has no prediction row");
    }
    Row row;
    row.probs[0] = to_prob_values(iv->second, vgg16.kind);
    row.probs[1] = to_prob_values(resnet50.rows.at(id), resnet50.kind);
    row.probs[2] = to_prob_values(inceptionv3.rows.at(id), inceptionv3.kind);
    row.truth = truth;
    rows.push_back(std::move(row));
  }

  GridSearchResult result;
  result.best_metric = -1.0;
  for (const auto& units : grid.points) {
    const std::array<double, 3> w = WeightGrid::to_weights(units, grid.denom);
    size_t correct = 0;
    for (const Row& row : rows) {
      Vec6 fusedv{};
      for (size_t m = 0; m < 3; ++m) {
        for (size_t c = 0; c < fusedv.size(); ++c) fusedv[c] += w[m] * row.probs[m][c];
      }
      size_t best = 0;
      for (size_t c = 1; c < fusedv.size(); ++c) {
        if (fusedv[c] > fusedv[best]) best = c;
      }
      if (static_cast<int>(best) == class_index(row.truth)) ++correct;
    }
    double accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());
    result.table.push_back({units, w, accuracy});
    // Strict > keeps the earliest (lexicographically smallest) maximizer.
    if (accuracy > result.best_metric) {
      result.best_metric = accuracy;
      result.best_units = units;
      result.best_weights = w;
    }
  }
  return result;
}

FusionConfig apply_ablation(const AblationConfig& ablation, const FusionConfig& base) {
  FusionConfig out = base;
  if (ablation.drop_model) {
    size_t drop = static_cast<size_t>(*ablation.drop_model);
    double remaining = 0.0;
    for (size_t i = 0; i < out.weights.size(); ++i) {
      if (i != drop) remaining += out.weights[i];
    }
    if (remaining <= 0.0) {
      throw ValidationError("cannot drop " +
                            std::string(model_name(*ablation.drop_model)) +
                            ": it carries the entire ensemble weight");
    }
    for (size_t i = 0; i < out.weights.size(); ++i) {
      out.weights[i] = (i == drop) ? 0.0 : out.weights[i] / remaining;
    }
  }
  if (!ablation.calibrate) out.temperature = 1.0;
  return FusionConfig::make(out.weights, out.temperature);
}

double fit_temperature(const std::map<std::string, ProbVector>& fused,
                       const std::map<std::string, ClassLabel>& labels,
                       double lo, double hi, double step) {
  if (fused.empty()) throw ValidationError("fit_temperature: empty prediction set");
  if (!(lo > 0.0) || hi < lo || !(step > 0.0)) {
    throw ValidationError("fit_temperature: invalid search range");
  }
  double best_t = lo, best_nll = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= steps; ++i) {
    const double t = lo + i * step;
    double nll = 0.0;
    size_t n = 0;
    for (const auto& [id, truth] : labels) {
      auto it = fused.find(id);
      if (it == fused.end()) {
        throw ValidationError("label id '" + id + "' has no fused row");
      }
      ProbVector calibrated = calibrate_fused(it->second, t);
      nll += -std::log(std::max(calibrated[truth], 1e-12));
      ++n;
    }
    if (n == 0) throw ValidationError("fit_temperature: empty label set");
    nll /= static_cast<double>(n);
    if (nll < best_nll) {
      best_nll = nll;
      best_t = t;
    }
  }
  return best_t;
}

FusionConfig load_fusion_config(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.filename().string(), "",
                     "fusion config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc.contains("temperature") ||
      !doc["weights"].is_array() || doc["weights"].size() != 3) {
    throw ParseError(path.filename().string(), "",
                     "expected {\"weights\":[w1,w2,w3],\"temperature\":T}");
  }
  std::array<double, 3> w{};
  for (size_t i = 0; i < 3; ++i) w[i] = doc["weights"][i].get<double>();
  return FusionConfig::make(w, doc["temperature"].get<double>());
}

void save_fusion_config(const FusionConfig& config, const std::filesystem::path& path) {
  nlohmann::json doc{{"weights", config.weights}, {"temperature", config.temperature}};
  write_file_atomic(path, doc.dump(2) + "\n");
}

void write_grid_csv(const GridSearchResult& result, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "w1,w2,w3,metric\n";
  char buf[96];
  for (const auto& row : result.table) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%.2f,%.6f\n", row.weights[0],
                  row.weights[1], row.weights[2], row.metric);
    out << buf;
  }
  write_file_atomic(path, out.str());
}

}  // namespace bovifuse
