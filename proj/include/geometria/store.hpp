#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geometria/lda.hpp"
#include "geometria/relations.hpp"

namespace geometria::store {

// Content-addressed on-disk cache: structures/<phi_digest> in STRUCT1
// format, models/<training_hash> in LDAM1 format. Writes are deterministic
// per digest, so last-writer-wins is safe.
class StructureStore {
 public:
  explicit StructureStore(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }

  bool has_structure(const std::string& digest) const;
  std::filesystem::path save_structure(const relations::Structure& s);
  relations::Structure load_structure(const std::string& digest) const;
  std::vector<std::string> structure_digests() const;

  bool has_model(const std::string& training_hash) const;
  std::filesystem::path save_model(const lda::TopicModel& model);
  std::optional<lda::TopicModel> load_model(
      const std::string& training_hash) const;

 private:
  std::filesystem::path structure_path(const std::string& digest) const;
  std::filesystem::path model_path(const std::string& hash) const;

  std::filesystem::path root_;
};

}  // namespace geometria::store
