#include "bovifuse/predictions.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "json.hpp"

namespace bovifuse {

namespace {

using nlohmann::json;

ScoreKind parse_kind_or_throw(const std::string& kind, const std::string& origin) {
  if (kind == "logits") return ScoreKind::Logits;
  if (kind == "probs") return ScoreKind::Probs;
  throw ParseError(origin, "kind", "expected 'logits' or 'probs', got '" + kind + "'");
}

Vec6 parse_scores_array(const json& arr, const std::string& record) {
  if (!arr.is_array()) throw ParseError(record, "scores", "expected an array");
  if (arr.size() != static_cast<size_t>(kNumClasses)) {
    throw ParseError(record, "scores",
                     "expected 6 scores, got " + std::to_string(arr.size()));
  }
  Vec6 v{};
  for (size_t i = 0; i < v.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError(record, "scores", "expected numbers");
    v[i] = arr[i].get<double>();
  }
  return v;
}

RawPredictions parse_jsonl(const std::string& text, const std::string& origin) {
  RawPredictions out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(origin + ":" + std::to_string(lineno), "",
                       "invalid JSON line: " + std::string(e.what()));
    }
    if (!have_header) {
      if (!row.is_object() || !row.contains("model") || !row.contains("kind")) {
        throw ParseError(origin + ":1", "",
                         "first line must be a header {\"model\":...,\"kind\":...}");
      }
      out.model = row["model"].get<std::string>();
      out.kind = parse_kind_or_throw(row["kind"].get<std::string>(), origin);
      have_header = true;
      continue;
    }
    if (!row.is_object() || !row.contains("id") || !row.contains("scores")) {
      throw ParseError(origin + ":" + std::to_string(lineno), "",
                       "expected {\"id\":...,\"scores\":[...]}");
    }
    std::string id = row["id"].get<std::string>();
    Vec6 scores = parse_scores_array(row["scores"], id);
    if (!out.rows.emplace(id, scores).second) {
      throw ParseError(id, "id", "duplicate id");
    }
  }
  if (!have_header) throw ParseError(origin, "", "empty prediction file");
  return out;
}

RawPredictions parse_csv(const std::string& text, const std::string& origin) {
  RawPredictions out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      std::string model, kind;
      char model_buf[64] = {0}, kind_buf[64] = {0};
      if (std::sscanf(line.c_str(), "# model=%63[^,],kind=%63s", model_buf, kind_buf) != 2) {
        throw ParseError(origin + ":1", "",
                         "expected comment header '# model=...,kind=...'");
      }
      out.model = model_buf;
      out.kind = parse_kind_or_throw(kind_buf, origin);
      have_header = true;
      continue;
    }
    if (line.rfind("id,", 0) == 0) continue;  // optional column-name row
    std::istringstream cells(line);
    std::string id;
    if (!std::getline(cells, id, ',') || id.empty()) {
      throw ParseError(origin + ":" + std::to_string(lineno), "id", "missing id");
    }
    Vec6 v{};
    std::string cell;
    size_t n = 0;
    while (std::getline(cells, cell, ',')) {
      if (n >= v.size()) {
        throw ParseError(id, "scores", "expected 6 scores, got more");
      }
      try {
        size_t used = 0;
        v[n] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(id, "scores", "not a number: '" + cell + "'");
      }
      ++n;
    }
    if (n != v.size()) {
      throw ParseError(id, "scores", "expected 6 scores, got " + std::to_string(n));
    }
    if (!out.rows.emplace(id, v).second) throw ParseError(id, "id", "duplicate id");
  }
  if (!have_header) throw ParseError(origin, "", "empty prediction file");
  return out;
}

void check_row_values(const std::string& id, const Vec6& scores, ScoreKind kind) {
  try {
    if (kind == ScoreKind::Probs) {
      ProbVector check(scores);
      (void)check;
    } else {
      LogitVector check(scores);
      (void)check;
    }
  } catch (const ValidationError& e) {
    throw ParseError(id, "scores", e.what());
  }
}

}  // namespace

std::map<std::string, ProbVector> PredictionSet::as_probabilities() const {
  std::map<std::string, ProbVector> out;
  for (const auto& [id, scores] : rows) {
    if (kind == ScoreKind::Probs) {
      out.emplace(id, ProbVector(scores));
    } else {
      out.emplace(id, softmax(LogitVector(scores)));
    }
  }
  return out;
}

RawPredictions read_prediction_file(const std::filesystem::path& path) {
  std::string text = read_file_text(path);
  std::string origin = path.filename().string();
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError(origin, "", "empty prediction file");
  if (text[first] == '{') return parse_jsonl(text, origin);
  if (text[first] == '#') return parse_csv(text, origin);
  throw ParseError(origin, "", "unrecognized prediction file format");
}

void write_predictions_jsonl(const RawPredictions& p, const std::filesystem::path& path) {
  std::ostringstream out;
  out << json{{"model", p.model}, {"kind", std::string(score_kind_name(p.kind))}}.dump()
      << "\n";
  for (const auto& [id, scores] : p.rows) {
    json row{{"id", id}, {"scores", scores}};
    out << row.dump() << "\n";
  }
  write_file_atomic(path, out.str());
}

void write_predictions_csv(const RawPredictions& p, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# model=" << p.model << ",kind=" << score_kind_name(p.kind) << "\n";
  out << "id,s1,s2,s3,s4,s5,s6\n";
  char buf[32];
  for (const auto& [id, scores] : p.rows) {
    out << id;
    for (double s : scores) {
      std::snprintf(buf, sizeof(buf), "%.17g", s);
      out << ',' << buf;
    }
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

PredictionSet validate_predictions(const RawPredictions& raw,
                                   const DatasetManifest& manifest, Split split,
                                   const std::string& origin) {
  auto model = parse_model(raw.model);
  if (!model) {
    throw ParseError(origin, "model",
                     "unknown model '" + raw.model +
                         "' (expected vgg16, resnet50 or inceptionv3)");
  }
  for (const auto& [id, scores] : raw.rows) check_row_values(id, scores, raw.kind);

  std::map<std::string, bool> expected;  // id -> seen
  for (const auto& r : manifest.samples) {
    if (r.split == split) expected.emplace(r.id, false);
  }
  std::vector<std::string> unexpected, missing;
  for (const auto& [id, scores] : raw.rows) {
    auto it = expected.find(id);
    if (it == expected.end()) {
      unexpected.push_back(id);
    } else {
      it->second = true;
    }
  }
  for (const auto& [id, seen] : expected) {
    if (!seen) missing.push_back(id);
  }
  if (!unexpected.empty() || !missing.empty()) {
    std::ostringstream msg;
    msg << "prediction ids do not match the manifest " << split_name(split)
        << " split;";
    auto list = [&msg](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg << " " << what << " (" << ids.size() << "):";
      for (size_t i = 0; i < ids.size() && i < 10; ++i) msg << " " << ids[i];
      if (ids.size() > 10) msg << " ...";
    };
    list("not in split", unexpected);
    list("missing", missing);
    throw ParseError(origin, "id", msg.str());
  }

  PredictionSet out;
  out.model = *model;
  out.kind = raw.kind;
  out.rows = raw.rows;
  return out;
}

PredictionSet load_predictions(const std::filesystem::path& path,
                               const DatasetManifest& manifest, Split split) {
  RawPredictions raw = read_prediction_file(path);
  return validate_predictions(raw, manifest, split, path.filename().string());
}

RawPredictions to_raw(const PredictionSet& p) {
  return RawPredictions{std::string(model_name(p.model)), p.kind, p.rows};
}

}  // namespace bovifuse
