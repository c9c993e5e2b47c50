#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geometria {

// The ordered decision chain that produced an artifact. Every structure
// carries one; its digest is the content address under which the structure
// is stored, and key-level comparison is how meta-level operations enforce
// a shared fixed backdrop.
class Provenance {
 public:
  Provenance() = default;

  // Appends a decision. Keys are namespaced ("lda.k", "measure.d", ...)
  // and must be unique within a chain.
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, std::int64_t value);
  void add(const std::string& key, double value);

  // Replaces the value of an existing key or appends if absent.
  void set(const std::string& key, const std::string& value);

  std::optional<std::string> find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key).has_value(); }

  const std::vector<std::pair<std::string, std::string>>& decisions() const {
    return decisions_;
  }
  bool empty() const { return decisions_.empty(); }
  std::size_t size() const { return decisions_.size(); }

  // Canonical one-decision-per-line rendering ("key=value\n"...).
  std::string canonical_text() const;

  // SHA-256 of canonical_text().
  std::string digest() const;

  // Human-readable multi-line listing, same content as canonical_text.
  std::string describe() const { return canonical_text(); }

  bool operator==(const Provenance& other) const {
    return decisions_ == other.decisions_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> decisions_;
};

// Canonical decimal rendering of a double: round-trips bit-exactly ("%.17g").
std::string format_full(double value);

// Canonical rendering used in provenance values and report cells.
std::string format_value(double value);

}  // namespace geometria
