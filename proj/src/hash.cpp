#include "investcoin/hash.hpp"

#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace investcoin {
namespace {

void AppendU32Be(uint32_t value, Bytes* out) {
  out->push_back(static_cast<uint8_t>((value >> 24) & 0xFF));
  out->push_back(static_cast<uint8_t>((value >> 16) & 0xFF));
  out->push_back(static_cast<uint8_t>((value >> 8) & 0xFF));
  out->push_back(static_cast<uint8_t>(value & 0xFF));
}

int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Digest Sha256(std::span<const uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("EVP_Digest(sha256) failed");
  }
  return out;
}

Bytes ToBytes(const mpz_class& value) {
  if (sgn(value) < 0) {
    throw std::invalid_argument("ToBytes expects a non-negative integer");
  }
  if (value == 0) {
    return {};
  }
  const std::size_t len = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  Bytes out(len);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(written);
  return out;
}

mpz_class FromBytes(std::span<const uint8_t> bytes) {
  mpz_class out;
  if (!bytes.empty()) {
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

std::string ToHex(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw std::invalid_argument("hex string has odd length");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = HexNibble(hex[i]);
    const int lo = HexNibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw std::invalid_argument("invalid hex digit");
    }
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

TranscriptHasher::TranscriptHasher(std::string_view domain) { Append(domain); }

TranscriptHasher& TranscriptHasher::Append(std::span<const uint8_t> field) {
  if (field.size() > UINT32_MAX) {
    throw std::invalid_argument("transcript field exceeds uint32 length");
  }
  AppendU32Be(static_cast<uint32_t>(field.size()), &buffer_);
  buffer_.insert(buffer_.end(), field.begin(), field.end());
  return *this;
}

TranscriptHasher& TranscriptHasher::Append(std::string_view field) {
  return Append(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(field.data()),
                                         field.size()));
}

TranscriptHasher& TranscriptHasher::Append(const mpz_class& field) {
  // Sign byte keeps negative and positive values of equal magnitude apart.
  Bytes encoded;
  encoded.push_back(sgn(field) < 0 ? 1 : 0);
  const mpz_class magnitude = abs(field);
  const Bytes mag = ToBytes(magnitude);
  encoded.insert(encoded.end(), mag.begin(), mag.end());
  return Append(std::span<const uint8_t>(encoded));
}

TranscriptHasher& TranscriptHasher::AppendU64(uint64_t field) {
  Bytes encoded(8);
  for (int i = 7; i >= 0; --i) {
    encoded[static_cast<std::size_t>(i)] = static_cast<uint8_t>(field & 0xFF);
    field >>= 8;
  }
  return Append(std::span<const uint8_t>(encoded));
}

Digest TranscriptHasher::Finish() const { return Sha256(buffer_); }

mpz_class TranscriptHasher::Expand(std::size_t bits) const {
  const Digest seed = Finish();
  const std::size_t blocks = (bits + 255) / 256;
  Bytes stream;
  stream.reserve(blocks * 32);
  for (std::size_t block = 0; block < blocks; ++block) {
    Bytes input(seed.begin(), seed.end());
    AppendU32Be(static_cast<uint32_t>(block), &input);
    const Digest d = Sha256(input);
    stream.insert(stream.end(), d.begin(), d.end());
  }
  return FromBytes(stream);
}

}  // namespace investcoin
