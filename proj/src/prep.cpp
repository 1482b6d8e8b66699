#include "bovifuse/prep.hpp"

#include <algorithm>

#include "bovifuse/canny.hpp"
#include "bovifuse/errors.hpp"
#include "bovifuse/fsio.hpp"
#include "json.hpp"

namespace bovifuse {

namespace fs = std::filesystem;

namespace {

struct ProcessedSample {
  SampleRecord record;
  bool flagged = false;
};

ProcessedSample process_one(const SampleRecord& rec, const PrepOptions& options,
                            const Rng& master, const fs::path& images_root,
                            const fs::path& out_dir) {
  ImageBuffer img = read_image(images_root / rec.path);
  img = resize_bilinear(img, options.target_size, options.target_size);

  ProcessedSample out;
  out.flagged = canny_edge_density(img) < options.edge_density_floor;

  if (!rec.synthetic) {
    Rng stream = master.substream("augment:" + rec.id);
    img = augment(img, options.augment, stream);
  }

  std::vector<uint8_t> png = encode_png(img);
  double roundtrip_db = psnr(img, decode_png(png));
  if (roundtrip_db <= options.psnr_floor_db) {
    throw ValidationError("re-encode PSNR " + std::to_string(roundtrip_db) +
                          " dB at or below floor");
  }

  fs::path png_rel = fs::path("images") / (rec.id + ".png");
  fs::path tensor_rel = fs::path("tensors") / (rec.id + ".hf");
  write_file_atomic(out_dir / png_rel, png);
  write_tensor_file(normalize(img), out_dir / tensor_rel);

  out.record = rec;
  out.record.path = png_rel.generic_string();
  out.record.sha256 = sha256_hex(png);
  return out;
}

}  // namespace

PrepResult run_prep_pipeline(const DatasetManifest& m, const PrepOptions& options,
                             const fs::path& images_root, const fs::path& out_dir) {
  options.augment.validate();
  Rng master(options.seed);

  // Real rows are shuffled; externally supplied synthetic rows keep
  // manifest order and skip augmentation.
  std::vector<size_t> real_order, synth_order;
  for (size_t i = 0; i < m.samples.size(); ++i) {
    (m.samples[i].synthetic ? synth_order : real_order).push_back(i);
  }
  Rng shuffle_stream = master.substream("shuffle");
  fisher_yates_shuffle(real_order, shuffle_stream);

  std::vector<size_t> order = real_order;
  order.insert(order.end(), synth_order.begin(), synth_order.end());

  PrepResult result;
  std::vector<SampleRecord> processed;
  processed.reserve(order.size());
  for (size_t idx : order) {
    const SampleRecord& rec = m.samples[idx];
    try {
      ProcessedSample p = process_one(rec, options, master, images_root, out_dir);
      if (p.flagged) result.report.flagged_low_edge_density.push_back(rec.id);
      processed.push_back(std::move(p.record));
      ++result.report.processed;
    } catch (const std::exception& e) {
      result.report.failed.push_back({rec.id, e.what()});
    }
  }
  result.manifest = make_manifest(std::move(processed));
  return result;
}

void write_prep_report(const PrepReport& report, const fs::path& path) {
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& f : report.failed) {
    failed.push_back({{"id", f.id}, {"reason", f.reason}});
  }
  nlohmann::json doc{{"processed", report.processed},
                     {"failed", std::move(failed)},
                     {"flagged_low_edge_density", report.flagged_low_edge_density}};
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace bovifuse
