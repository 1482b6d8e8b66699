#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "bovifuse/manifest.hpp"
#include "bovifuse/scores.hpp"

namespace bovifuse {

enum class ScoreKind { Logits, Probs };

constexpr std::string_view score_kind_name(ScoreKind k) {
  return k == ScoreKind::Logits ? "logits" : "probs";
}

/// One model's scores for a set of samples, keyed by sample id. The map
/// keeps ids sorted so iteration order is deterministic.
struct PredictionSet {
  ModelId model = ModelId::Vgg16;
  ScoreKind kind = ScoreKind::Probs;
  std::map<std::string, Vec6> rows;

  /// Rows as probability vectors; logits are softmaxed.
  std::map<std::string, ProbVector> as_probabilities() const;
};

/// A prediction file before model/manifest validation. Used for derived
/// streams (fused, calibrated) whose model field is not one of the three
/// base networks.
struct RawPredictions {
  std::string model;
  ScoreKind kind = ScoreKind::Probs;
  std::map<std::string, Vec6> rows;
};

/// Reads a prediction file. JSON Lines (header line {"model":...,"kind":...}
/// then one {"id":...,"scores":[...]} per line) or CSV (leading comment row
/// "# model=...,kind=...", then id,s1..s6 rows); the format is sniffed from
/// the first byte.
RawPredictions read_prediction_file(const std::filesystem::path& path);

void write_predictions_jsonl(const RawPredictions& p, const std::filesystem::path& path);
void write_predictions_csv(const RawPredictions& p, const std::filesystem::path& path);

/// Validates a raw file against the manifest: the model must be one of the
/// three base networks, every score row must be well formed, and the id set
/// must be exactly the manifest ids in `split`.
PredictionSet load_predictions(const std::filesystem::path& path,
                               const DatasetManifest& manifest, Split split);

/// Same validation for an already-parsed file.
PredictionSet validate_predictions(const RawPredictions& raw,
                                   const DatasetManifest& manifest, Split split,
                                   const std::string& origin);

RawPredictions to_raw(const PredictionSet& p);

}  // namespace bovifuse
