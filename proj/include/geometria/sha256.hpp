#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace geometria {

// Self-contained SHA-256 (FIPS 180-4). Used for decision-chain digests and
// content-addressed filenames; hex output keeps store paths portable.
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }

  // Finalizes and returns the 64-char lowercase hex digest.
  std::string hex();

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::uint64_t bit_length_ = 0;
  std::size_t buffer_len_ = 0;
};

std::string sha256_hex(std::string_view data);

// First 8 digest bytes as an integer; convenient for deriving RNG seeds.
std::uint64_t sha256_seed(std::string_view data);

}  // namespace geometria
