#include "geometria/store.hpp"

#include <algorithm>

#include "geometria/errors.hpp"

namespace geometria::store {

namespace fs = std::filesystem;

StructureStore::StructureStore(const fs::path& root) : root_(root) {
  std::error_code ec;
  fs::create_directories(root_ / "structures", ec);
  fs::create_directories(root_ / "models", ec);
  if (ec) fail(Errc::IoError, "cannot create store at '" + root_.string() + "'");
}

fs::path StructureStore::structure_path(const std::string& digest) const {
  if (digest.empty() || digest.find('/') != std::string::npos)
    fail(Errc::InvalidParameter, "bad digest '" + digest + "'");
  return root_ / "structures" / digest;
}

fs::path StructureStore::model_path(const std::string& hash) const {
  if (hash.empty() || hash.find('/') != std::string::npos)
    fail(Errc::InvalidParameter, "bad training hash '" + hash + "'");
  return root_ / "models" / hash;
}

bool StructureStore::has_structure(const std::string& digest) const {
  return fs::exists(structure_path(digest));
}

fs::path StructureStore::save_structure(const relations::Structure& s) {
  const fs::path path = structure_path(s.phi_digest());
  if (!fs::exists(path)) relations::save_structure(s, path.string());
  return path;
}

relations::Structure StructureStore::load_structure(
    const std::string& digest) const {
  const fs::path path = structure_path(digest);
  if (!fs::exists(path))
    fail(Errc::MissingInput, "no structure '" + digest + "' in store");
  relations::Structure s = relations::load_structure(path.string());
  if (s.phi_digest() != digest)
    fail(Errc::StoreCorruption,
         "structure '" + digest + "' does not match its address");
  return s;
}

std::vector<std::string> StructureStore::structure_digests() const {
  std::vector<std::string> digests;
  for (const auto& entry : fs::directory_iterator(root_ / "structures")) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > 5 && name.ends_with(".prov")) continue;
    digests.push_back(name);
  }
  std::sort(digests.begin(), digests.end());
  return digests;
}

bool StructureStore::has_model(const std::string& training_hash) const {
  return fs::exists(model_path(training_hash));
}

fs::path StructureStore::save_model(const lda::TopicModel& model) {
  const fs::path path = model_path(model.training_hash);
  if (!fs::exists(path)) lda::save_model(model, path.string());
  return path;
}

std::optional<lda::TopicModel> StructureStore::load_model(
    const std::string& training_hash) const {
  const fs::path path = model_path(training_hash);
  if (!fs::exists(path)) return std::nullopt;
  lda::TopicModel model = lda::load_model(path.string());
  if (model.training_hash != training_hash)
    fail(Errc::StoreCorruption,
         "model '" + training_hash + "' does not match its address");
  return model;
}

}  // namespace geometria::store
