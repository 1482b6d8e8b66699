#include "bovifuse/labels.hpp"

#include <string>

#include "bovifuse/errors.hpp"

namespace bovifuse {

ClassLabel class_from_index(int idx) {
  if (idx < 0 || idx >= kNumClasses) {
    throw ValidationError("class index out of range: " + std::to_string(idx));
  }
  return static_cast<ClassLabel>(idx);
}

std::optional<ClassLabel> parse_class(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kClassNames[static_cast<size_t>(i)] == name) return static_cast<ClassLabel>(i);
  }
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view name) {
  for (size_t i = 0; i < kSplitNames.size(); ++i) {
    if (kSplitNames[i] == name) return static_cast<Split>(i);
  }
  return std::nullopt;
}

std::optional<ModelId> parse_model(std::string_view name) {
  for (size_t i = 0; i < kModelNames.size(); ++i) {
    if (kModelNames[i] == name) return static_cast<ModelId>(i);
  }
  return std::nullopt;
}

}  // namespace bovifuse
