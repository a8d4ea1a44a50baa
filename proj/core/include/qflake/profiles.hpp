#pragma once

#include <optional>
#include <string_view>

#include "qflake/classifiers.hpp"

namespace qflake {

enum class Profile { PaperVanilla, PaperSmote };

std::string_view to_string(Profile p) noexcept;
std::optional<Profile> parse_profile(std::string_view text) noexcept;

struct ProfileSettings {
  ClassifierSpec model;
  /// Set only for the families that are fed PCA-reduced features (KNN, SVM).
  std::optional<std::size_t> pca_components;
};

/// Hyperparameters reported for the original experiments. Where the SMOTE
/// variant leaves a value unstated, the vanilla value carries over.
ProfileSettings builtin_profile(Family family, Profile profile);

}  // namespace qflake
