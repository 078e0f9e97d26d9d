#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace investcoin {

using Bytes = std::vector<uint8_t>;
using Digest = std::array<uint8_t, 32>;

Digest Sha256(std::span<const uint8_t> data);

// Big-endian magnitude bytes of a non-negative integer (empty for zero).
Bytes ToBytes(const mpz_class& value);
mpz_class FromBytes(std::span<const uint8_t> bytes);

std::string ToHex(std::span<const uint8_t> bytes);
Bytes FromHex(std::string_view hex);

// Length-prefixed field encoder. Every field is written as a 4-byte big-endian
// length followed by its bytes, so distinct field sequences never collide.
class TranscriptHasher {
 public:
  explicit TranscriptHasher(std::string_view domain);

  TranscriptHasher& Append(std::span<const uint8_t> field);
  TranscriptHasher& Append(std::string_view field);
  TranscriptHasher& Append(const mpz_class& field);
  TranscriptHasher& AppendU64(uint64_t field);

  const Bytes& encoded() const { return buffer_; }
  Digest Finish() const;

  // Counter-mode expansion of the encoded transcript to at least `bits` bits.
  mpz_class Expand(std::size_t bits) const;

 private:
  Bytes buffer_;
};

}  // namespace investcoin
