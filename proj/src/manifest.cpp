#include "bovifuse/manifest.hpp"

#include <cctype>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "json.hpp"

namespace bovifuse {

namespace {

using nlohmann::json;

bool is_lower_hex64(const std::string& s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

bool digits(const std::string& s, size_t pos, size_t n) {
  if (pos + n > s.size()) return false;
  for (size_t i = 0; i < n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos + i]))) return false;
  }
  return true;
}

int num2(const std::string& s, size_t pos) {
  return (s[pos] - '0') * 10 + (s[pos + 1] - '0');
}

// Accepts YYYY-MM-DDTHH:MM:SS with optional fractional seconds and an
// optional Z / +HH:MM / -HHMM offset. Shape only; no calendar math.
bool is_iso8601(const std::string& s) {
  if (!digits(s, 0, 4) || s.size() < 19) return false;
  if (s[4] != '-' || !digits(s, 5, 2) || s[7] != '-' || !digits(s, 8, 2)) return false;
  if (s[10] != 'T') return false;
  if (!digits(s, 11, 2) || s[13] != ':' || !digits(s, 14, 2) || s[16] != ':' ||
      !digits(s, 17, 2)) {
    return false;
  }
  int month = num2(s, 5), day = num2(s, 8);
  int hour = num2(s, 11), minute = num2(s, 14), second = num2(s, 17);
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  if (hour > 23 || minute > 59 || second > 60) return false;
  size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) return false;
  }
  if (pos == s.size()) return true;
  if (s[pos] == 'Z') return pos + 1 == s.size();
  if (s[pos] == '+' || s[pos] == '-') {
    ++pos;
    if (!digits(s, pos, 2)) return false;
    pos += 2;
    if (pos < s.size() && s[pos] == ':') ++pos;
    if (!digits(s, pos, 2)) return false;
    return pos + 2 == s.size();
  }
  return false;
}

void warn_unknown_fields(const json& obj, const std::set<std::string>& known,
                         const std::string& where,
                         std::set<std::string>& already_warned) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (known.count(it.key())) continue;
    std::string key = where + "." + it.key();
    if (already_warned.insert(key).second) {
      std::cerr << "warning: ignoring unknown field '" << it.key() << "' in "
                << where << "\n";
    }
  }
}

const json& require_field(const json& obj, const char* field, const std::string& record) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(record, field, "missing field");
  return *it;
}

std::string get_string(const json& obj, const char* field, const std::string& record) {
  const json& v = require_field(obj, field, record);
  if (!v.is_string()) throw ParseError(record, field, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& obj, const char* field, const std::string& record) {
  const json& v = require_field(obj, field, record);
  if (!v.is_number()) throw ParseError(record, field, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const char* field, const std::string& record) {
  const json& v = require_field(obj, field, record);
  if (!v.is_boolean()) throw ParseError(record, field, "expected a boolean");
  return v.get<bool>();
}

SampleRecord parse_record(const json& obj, size_t index,
                          std::set<std::string>& warned) {
  std::string fallback = "samples[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw ParseError(fallback, "", "expected an object");
  std::string record = obj.contains("id") && obj["id"].is_string()
                           ? obj["id"].get<std::string>()
                           : fallback;

  SampleRecord r;
  r.id = get_string(obj, "id", record);
  if (r.id.empty()) throw ParseError(record, "id", "must be non-empty");
  r.path = get_string(obj, "path", record);
  if (r.path.empty()) throw ParseError(record, "path", "must be non-empty");

  std::string cls = get_string(obj, "class", record);
  auto parsed_cls = parse_class(cls);
  if (!parsed_cls) throw ParseError(record, "class", "unknown class name '" + cls + "'");
  r.cls = *parsed_cls;

  std::string split = get_string(obj, "split", record);
  auto parsed_split = parse_split(split);
  if (!parsed_split) throw ParseError(record, "split", "unknown split '" + split + "'");
  r.split = *parsed_split;

  r.synthetic = get_bool(obj, "synthetic", record);
  r.sha256 = get_string(obj, "sha256", record);

  const json& source = require_field(obj, "source", record);
  if (!source.is_object()) throw ParseError(record, "source", "expected an object");
  r.source.farm_id = get_string(source, "farm_id", record);
  const json& gps = require_field(source, "gps", record);
  if (!gps.is_object()) throw ParseError(record, "source.gps", "expected an object");
  r.source.gps.lat = get_number(gps, "lat", record);
  r.source.gps.lon = get_number(gps, "lon", record);
  r.source.timestamp = get_string(source, "timestamp", record);
  r.source.breed = get_string(source, "breed", record);
  double age = get_number(source, "age_months", record);
  if (age < 0 || age != static_cast<double>(static_cast<int>(age))) {
    throw ParseError(record, "source.age_months", "expected a non-negative integer");
  }
  r.source.age_months = static_cast<int>(age);
  r.source.vet_confirmed = get_bool(source, "vet_confirmed", record);

  static const std::set<std::string> known_sample = {
      "id", "path", "class", "split", "synthetic", "sha256", "source"};
  static const std::set<std::string> known_source = {
      "farm_id", "gps", "timestamp", "breed", "age_months", "vet_confirmed"};
  warn_unknown_fields(obj, known_sample, "sample", warned);
  warn_unknown_fields(source, known_source, "source", warned);
  return r;
}

void validate_record(const SampleRecord& r) {
  if (!is_lower_hex64(r.sha256)) {
    throw ParseError(r.id, "sha256", "expected 64 lowercase hex characters");
  }
  if (r.source.gps.lat < -90.0 || r.source.gps.lat > 90.0) {
    throw ParseError(r.id, "source.gps.lat", "latitude out of [-90,90]");
  }
  if (r.source.gps.lon < -180.0 || r.source.gps.lon > 180.0) {
    throw ParseError(r.id, "source.gps.lon", "longitude out of [-180,180]");
  }
  if (!is_iso8601(r.source.timestamp)) {
    throw ParseError(r.id, "source.timestamp",
                     "not an ISO-8601 timestamp: '" + r.source.timestamp + "'");
  }
  if (r.source.age_months < 0) {
    throw ParseError(r.id, "source.age_months", "must be non-negative");
  }
  if (r.synthetic && r.cls != ClassLabel::FmdFoot && r.cls != ClassLabel::FmdMouth &&
      r.cls != ClassLabel::LsdSkin) {
    throw ParseError(r.id, "synthetic",
                     "synthetic images are only permitted for fmd-foot, fmd-mouth "
                     "and lsd-skin");
  }
}

json record_to_json(const SampleRecord& r) {
  return json{{"id", r.id},
              {"path", r.path},
              {"class", std::string(class_name(r.cls))},
              {"split", std::string(split_name(r.split))},
              {"synthetic", r.synthetic},
              {"sha256", r.sha256},
              {"source",
               json{{"farm_id", r.source.farm_id},
                    {"gps", json{{"lat", r.source.gps.lat}, {"lon", r.source.gps.lon}}},
                    {"timestamp", r.source.timestamp},
                    {"breed", r.source.breed},
                    {"age_months", r.source.age_months},
                    {"vet_confirmed", r.source.vet_confirmed}}}};
}

}  // namespace

int CountTable::total() const {
  int sum = 0;
  for (int c : cells_) sum += c;
  return sum;
}

CountTable tally(const std::vector<SampleRecord>& samples) {
  CountTable t;
  for (const auto& r : samples) ++t.at(r.cls, r.split, r.synthetic);
  return t;
}

CountTable reference_composition() {
  CountTable t;
  struct Row {
    ClassLabel cls;
    int train_real, train_synth, testing, validation;
  };
  static constexpr Row rows[] = {
      {ClassLabel::FmdFoot, 1050, 500, 388, 50},
      {ClassLabel::FmdMouth, 1050, 500, 388, 50},
      {ClassLabel::HealthyFoot, 1550, 0, 388, 50},
      {ClassLabel::HealthyMouth, 1550, 0, 388, 50},
      {ClassLabel::HealthySkin, 1000, 0, 250, 32},
      {ClassLabel::LsdSkin, 500, 500, 250, 32},
  };
  for (const Row& r : rows) {
    t.at(r.cls, Split::Training, false) = r.train_real;
    t.at(r.cls, Split::Training, true) = r.train_synth;
    t.at(r.cls, Split::Testing, false) = r.testing;
    t.at(r.cls, Split::Validation, false) = r.validation;
  }
  return t;
}

DatasetManifest make_manifest(std::vector<SampleRecord> samples) {
  std::unordered_set<std::string> ids, paths;
  for (const auto& r : samples) {
    validate_record(r);
    if (!ids.insert(r.id).second) throw ParseError(r.id, "id", "duplicate id");
    if (!paths.insert(r.path).second) throw ParseError(r.id, "path", "duplicate path");
  }
  DatasetManifest m;
  m.counts = tally(samples);
  m.samples = std::move(samples);
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError("", "", "manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
    throw ParseError("", "samples", "manifest must be an object with a samples array");
  }
  std::set<std::string> warned;
  std::vector<SampleRecord> samples;
  samples.reserve(doc["samples"].size());
  for (size_t i = 0; i < doc["samples"].size(); ++i) {
    samples.push_back(parse_record(doc["samples"][i], i, warned));
  }
  return make_manifest(std::move(samples));
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  json samples = json::array();
  for (const auto& r : m.samples) samples.push_back(record_to_json(r));
  json doc{{"samples", std::move(samples)}};
  write_file_atomic(path, doc.dump(2) + "\n");
}

SplitReport verify_split_accounting(const DatasetManifest& m, const CountTable& expected) {
  SplitReport report;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int s = 0; s < 3; ++s) {
      for (int syn = 0; syn < 2; ++syn) {
        ClassLabel cls = static_cast<ClassLabel>(c);
        Split split = static_cast<Split>(s);
        int want = expected.at(cls, split, syn != 0);
        int got = m.counts.at(cls, split, syn != 0);
        if (want != got) {
          report.pass = false;
          report.diffs.push_back({cls, split, syn != 0, want, got});
        }
      }
    }
  }
  return report;
}

std::string format_split_report(const SplitReport& report) {
  if (report.pass) return "split accounting: PASS\n";
  std::ostringstream out;
  out << "split accounting: FAIL (" << report.diffs.size() << " cell(s))\n";
  for (const auto& d : report.diffs) {
    out << "  class=" << class_name(d.cls) << " split=" << split_name(d.split)
        << " synthetic=" << (d.synthetic ? "true" : "false")
        << " expected=" << d.expected << " actual=" << d.actual
        << " diff=" << (d.diff() >= 0 ? "+" : "") << d.diff() << "\n";
  }
  return out.str();
}

DedupResult dedup_by_digest(const DatasetManifest& m) {
  std::unordered_set<std::string> seen;
  DedupResult result;
  std::vector<SampleRecord> kept;
  kept.reserve(m.samples.size());
  for (const auto& r : m.samples) {
    if (seen.insert(r.sha256).second) {
      kept.push_back(r);
    } else {
      result.removed.push_back(r.id);
    }
  }
  result.manifest.counts = tally(kept);
  result.manifest.samples = std::move(kept);
  return result;
}

}  // namespace bovifuse
