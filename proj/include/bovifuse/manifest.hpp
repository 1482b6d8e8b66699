#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "bovifuse/labels.hpp"

namespace bovifuse {

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

/// Provenance carried with every image. Timestamps are validated
/// syntactically (ISO-8601) and otherwise passed through untouched.
struct SourceInfo {
  std::string farm_id;
  GeoPoint gps;
  std::string timestamp;
  std::string breed;
  int age_months = 0;
  bool vet_confirmed = false;
};

struct SampleRecord {
  std::string id;
  std::string path;  // relative to the manifest's directory
  ClassLabel cls = ClassLabel::FmdFoot;
  Split split = Split::Training;
  bool synthetic = false;
  std::string sha256;  // 64 lowercase hex chars
  SourceInfo source;
};

/// Occupancy tally over (class, split, synthetic).
class CountTable {
 public:
  int& at(ClassLabel c, Split s, bool synthetic) {
    return cells_[index(c, s, synthetic)];
  }
  int at(ClassLabel c, Split s, bool synthetic) const {
    return cells_[index(c, s, synthetic)];
  }

  int total() const;

  bool operator==(const CountTable&) const = default;

 private:
  static size_t index(ClassLabel c, Split s, bool synthetic) {
    return (static_cast<size_t>(c) * 3 + static_cast<size_t>(s)) * 2 +
           (synthetic ? 1 : 0);
  }
  std::array<int, kNumClasses * 3 * 2> cells_{};
};

CountTable tally(const std::vector<SampleRecord>& samples);

/// The published dataset composition used by --check-table1.
CountTable reference_composition();

struct DatasetManifest {
  std::vector<SampleRecord> samples;
  CountTable counts;  // always kept equal to tally(samples)

  size_t total() const { return samples.size(); }
};

/// Builds a manifest from records, validating every invariant (unique ids,
/// unique paths, per-record field rules). Throws ParseError naming the
/// offending record and field.
DatasetManifest make_manifest(std::vector<SampleRecord> samples);

/// Reads and validates a manifest JSON file ({"samples":[...]}).
/// Unknown fields are ignored with a warning on stderr.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);

struct SplitDiff {
  ClassLabel cls;
  Split split;
  bool synthetic;
  int expected;
  int actual;
  int diff() const { return actual - expected; }
};

struct SplitReport {
  bool pass = true;
  std::vector<SplitDiff> diffs;  // only the mismatching cells
};

/// Compares the manifest's (class, split, synthetic) tallies against an
/// expected table. Mismatches are report content, not errors.
SplitReport verify_split_accounting(const DatasetManifest& m, const CountTable& expected);

std::string format_split_report(const SplitReport& report);

struct DedupResult {
  DatasetManifest manifest;
  std::vector<std::string> removed;  // ids, in manifest order
};

/// Keeps the first record (in manifest order) for each sha256 value and
/// drops the rest. Counts are retallied.
DedupResult dedup_by_digest(const DatasetManifest& m);

}  // namespace bovifuse
