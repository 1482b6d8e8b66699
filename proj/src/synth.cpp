#include "bovifuse/synth.hpp"

#include <cmath>
#include <cstdio>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "bovifuse/rng.hpp"

namespace bovifuse {

namespace {

SampleRecord make_synth_record(const std::string& id, ClassLabel cls, Split split) {
  SampleRecord r;
  r.id = id;
  r.path = "synthetic/" + id + ".png";
  r.cls = cls;
  r.split = split;
  r.synthetic = false;
  r.sha256 = sha256_hex(id);
  r.source = SourceInfo{"synth-bench", {23.685, 90.3563}, "2024-01-01T00:00:00Z",
                        "synthetic", 24, false};
  return r;
}

Vec6 peaked_scores(ClassLabel emitted, double sharpness) {
  Vec6 z{};
  z[static_cast<size_t>(emitted)] = sharpness;
  return softmax(LogitVector(z)).values();
}

ClassLabel draw_wrong_class(ClassLabel truth, const SyntheticSpec& spec, Rng& rng) {
  // Confusion partners of the true class get 5x the weight of other
  // wrong classes.
  std::array<uint64_t, kNumClasses> weight{};
  uint64_t total = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (c == class_index(truth)) continue;
    uint64_t w = 1;
    for (const auto& [a, b] : spec.confusion_bias) {
      if ((a == truth && class_index(b) == c) || (b == truth && class_index(a) == c)) {
        w = 5;
      }
    }
    weight[static_cast<size_t>(c)] = w;
    total += w;
  }
  uint64_t pick = rng.uniform_index(total);
  for (int c = 0; c < kNumClasses; ++c) {
    uint64_t w = weight[static_cast<size_t>(c)];
    if (pick < w) return static_cast<ClassLabel>(c);
    pick -= w;
  }
  return truth;  // unreachable
}

}  // namespace

void SyntheticSpec::validate() const {
  for (int n : n_per_class) {
    if (n < 0) throw ValidationError("synthetic counts must be non-negative");
  }
  for (double a : model_accuracies) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw ValidationError("model accuracies must lie in (0,1]");
    }
  }
  if (!(score_sharpness > 0.0)) {
    throw ValidationError("score sharpness must be positive");
  }
}

SynthResult synthesize(const SyntheticSpec& spec, uint64_t seed) {
  spec.validate();
  Rng rng = Rng(seed).substream("synth");

  SynthResult out;
  for (size_t m = 0; m < 3; ++m) {
    out.predictions[m].model = static_cast<ModelId>(m);
    out.predictions[m].kind = ScoreKind::Probs;
  }

  std::vector<SampleRecord> records;
  char idbuf[64];
  for (int c = 0; c < kNumClasses; ++c) {
    ClassLabel truth = static_cast<ClassLabel>(c);
    for (int k = 0; k < spec.n_per_class[static_cast<size_t>(c)]; ++k) {
      std::snprintf(idbuf, sizeof(idbuf), "synth-%s-%05d",
                    std::string(class_name(truth)).c_str(), k);
      std::string id = idbuf;
      records.push_back(make_synth_record(id, truth, spec.split));
      for (size_t m = 0; m < 3; ++m) {
        bool correct = rng.next_double() < spec.model_accuracies[m];
        ClassLabel emitted = correct ? truth : draw_wrong_class(truth, spec, rng);
        out.predictions[m].rows.emplace(id, peaked_scores(emitted, spec.score_sharpness));
      }
    }
  }
  out.manifest = make_manifest(std::move(records));
  return out;
}

SynthResult synthesize_from_confusion(const ConfusionMatrix& target,
                                      double score_sharpness, Split split) {
  if (!(score_sharpness > 0.0)) {
    throw ValidationError("score sharpness must be positive");
  }
  SynthResult out;
  for (size_t m = 0; m < 3; ++m) {
    out.predictions[m].model = static_cast<ModelId>(m);
    out.predictions[m].kind = ScoreKind::Probs;
  }

  std::vector<SampleRecord> records;
  char idbuf[64];
  for (int t = 0; t < kNumClasses; ++t) {
    for (int p = 0; p < kNumClasses; ++p) {
      for (int64_t k = 0; k < target.at(t, p); ++k) {
        std::snprintf(idbuf, sizeof(idbuf), "cell-%d-%d-%05lld", t, p,
                      static_cast<long long>(k));
        std::string id = idbuf;
        records.push_back(make_synth_record(id, static_cast<ClassLabel>(t), split));
        Vec6 scores = peaked_scores(static_cast<ClassLabel>(p), score_sharpness);
        for (size_t m = 0; m < 3; ++m) out.predictions[m].rows.emplace(id, scores);
      }
    }
  }
  if (records.empty()) throw ValidationError("target confusion matrix is empty");
  out.manifest = make_manifest(std::move(records));
  return out;
}

}  // namespace bovifuse
