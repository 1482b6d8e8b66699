#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace bovifuse {

inline constexpr int kNumClasses = 6;

/// The six-class label space. The index order is canonical: every file
/// format, confusion matrix and report in this project uses it, so a value
/// in column 3 always means healthy-mouth.
enum class ClassLabel : int {
  FmdFoot = 0,
  FmdMouth = 1,
  HealthyFoot = 2,
  HealthyMouth = 3,
  HealthySkin = 4,
  LsdSkin = 5,
};

inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "fmd-foot",      "fmd-mouth",    "healthy-foot",
    "healthy-mouth", "healthy-skin", "lsd-skin"};

constexpr int class_index(ClassLabel c) { return static_cast<int>(c); }

constexpr std::string_view class_name(ClassLabel c) {
  return kClassNames[static_cast<size_t>(c)];
}

/// Throws ValidationError if idx is outside [0,5].
ClassLabel class_from_index(int idx);

std::optional<ClassLabel> parse_class(std::string_view name);

/// The three dataset partitions.
enum class Split : int { Training = 0, Testing = 1, Validation = 2 };

inline constexpr std::array<std::string_view, 3> kSplitNames = {
    "training", "testing", "validation"};

constexpr std::string_view split_name(Split s) {
  return kSplitNames[static_cast<size_t>(s)];
}

std::optional<Split> parse_split(std::string_view name);

/// The three base models whose predictions get fused.
enum class ModelId : int { Vgg16 = 0, Resnet50 = 1, InceptionV3 = 2 };

inline constexpr std::array<std::string_view, 3> kModelNames = {
    "vgg16", "resnet50", "inceptionv3"};

constexpr std::string_view model_name(ModelId m) {
  return kModelNames[static_cast<size_t>(m)];
}

std::optional<ModelId> parse_model(std::string_view name);

}  // namespace bovifuse
