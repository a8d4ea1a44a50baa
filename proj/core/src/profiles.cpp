#include "qflake/profiles.hpp"

namespace qflake {

std::string_view to_string(Profile p) noexcept {
  return p == Profile::PaperSmote ? "paper_smote" : "paper_vanilla";
}

std::optional<Profile> parse_profile(std::string_view text) noexcept {
  if (text == "paper_vanilla") return Profile::PaperVanilla;
  if (text == "paper_smote") return Profile::PaperSmote;
  return std::nullopt;
}

ProfileSettings builtin_profile(Family family, Profile profile) {
  const bool smote = profile == Profile::PaperSmote;
  ProfileSettings s;
  s.model.family = family;
  auto& p = s.model.params;
  switch (family) {
    case Family::XGB:
      p["learning_rate"] = smote ? 0.3 : 0.5;
      p["max_depth"] = std::int64_t{smote ? 3 : 5};
      p["n_estimators"] = std::int64_t{smote ? 200 : 100};
      break;
    case Family::DT:
      p["criterion"] = std::string(smote ? "gini" : "entropy");
      p["max_depth"] = std::int64_t{10};
      p["min_samples_leaf"] = std::int64_t{2};
      p["min_samples_split"] = std::int64_t{10};
      break;
    case Family::RF:
      p["n_estimators"] = std::int64_t{smote ? 100 : 200};
      p["criterion"] = std::string("entropy");
      p["max_depth"] = std::int64_t{10};
      p["min_samples_leaf"] = std::int64_t{2};
      p["min_samples_split"] = std::int64_t{5};
      break;
    case Family::KNN:
      p["n_neighbors"] = std::int64_t{smote ? 7 : 3};
      p["metric"] = std::string("euclidean");
      p["weights"] = std::string("distance");
      s.pca_components = smote ? 200 : 150;
      break;
    case Family::SVM:
      p["C"] = 0.01;
      s.pca_components = smote ? 180 : 220;
      break;
  }
  return s;
}

}  // namespace qflake
