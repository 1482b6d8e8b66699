#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bovifuse/augment.hpp"
#include "bovifuse/manifest.hpp"

namespace bovifuse {

struct PrepOptions {
  int target_size = 224;
  AugmentSpec augment;
  uint64_t seed = 42;
  /// Images whose Canny edge density falls below this are flagged for
  /// human review (never auto-dropped).
  double edge_density_floor = 0.01;
  /// Images whose self-re-encode PSNR falls at or below this are dropped
  /// as quality failures. PNG is lossless, so with the default working
  /// format this gate can only fire on a broken encoder.
  double psnr_floor_db = 22.0;
};

struct PrepFailure {
  std::string id;
  std::string reason;
};

struct PrepReport {
  int processed = 0;
  std::vector<PrepFailure> failed;
  std::vector<std::string> flagged_low_edge_density;
};

struct PrepResult {
  DatasetManifest manifest;
  PrepReport report;
};

/// Runs the curation pipeline over a manifest:
///   real rows: decode -> resize to target -> augment (seeded per id) ->
///   normalize; synthetic rows (externally supplied) skip augmentation.
/// Real rows are reordered by a seeded Fisher-Yates shuffle; synthetic rows
/// follow in manifest order. Every processed image is written to
/// out_dir/images/<id>.png (8-bit) plus out_dir/tensors/<id>.hf
/// (normalized floats), and the returned manifest points at the new files
/// with recomputed digests.
///
/// Quality screens: the Canny edge density of the resized source is
/// compared against options.edge_density_floor (low-density ids are
/// flagged in the report), and each output is PSNR-checked against its own
/// re-encode. Undecodable or failing files are collected in the report and
/// the pipeline continues.
///
/// Augmentation draws come from a substream keyed on (seed, sample id), so
/// outputs are byte-identical for identical inputs regardless of
/// processing order.
PrepResult run_prep_pipeline(const DatasetManifest& m, const PrepOptions& options,
                             const std::filesystem::path& images_root,
                             const std::filesystem::path& out_dir);

void write_prep_report(const PrepReport& report, const std::filesystem::path& path);

}  // namespace bovifuse
