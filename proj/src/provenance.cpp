#include "geometria/provenance.hpp"

#include <cstdio>

#include "geometria/errors.hpp"
#include "geometria/sha256.hpp"

namespace geometria {

void Provenance::add(const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos ||
      key.find('\n') != std::string::npos)
    fail(Errc::InvalidParameter, "bad provenance key '" + key + "'");
  if (value.find('\n') != std::string::npos)
    fail(Errc::InvalidParameter, "provenance value for '" + key +
                                     "' contains a newline");
  if (has(key))
    fail(Errc::DuplicateDecision, "decision '" + key + "' already recorded");
  decisions_.emplace_back(key, value);
}

void Provenance::add(const std::string& key, std::int64_t value) {
  add(key, std::to_string(value));
}

void Provenance::add(const std::string& key, double value) {
  add(key, format_full(value));
}

void Provenance::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : decisions_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  add(key, value);
}

std::optional<std::string> Provenance::find(const std::string& key) const {
  for (const auto& [k, v] : decisions_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Provenance::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : decisions_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::string Provenance::digest() const { return sha256_hex(canonical_text()); }

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_value(double value) { return format_full(value); }

}  // namespace geometria
