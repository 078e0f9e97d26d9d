#include "investcoin/random.hpp"

#include <stdexcept>

namespace investcoin {

Drbg::Drbg(std::span<const uint8_t> seed, std::string_view label) {
  TranscriptHasher h("investcoin/drbg/seed");
  h.Append(seed).Append(label);
  key_ = h.Finish();
}

Drbg::Drbg(std::string_view seed, std::string_view label)
    : Drbg(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(seed.data()), seed.size()),
           label) {}

Drbg Drbg::Fork(std::string_view label) const {
  TranscriptHasher h("investcoin/drbg/fork");
  h.Append(std::span<const uint8_t>(key_)).Append(label);
  Drbg child;
  child.key_ = h.Finish();
  return child;
}

Drbg Drbg::Fork(std::string_view label, uint64_t index) const {
  TranscriptHasher h("investcoin/drbg/fork-indexed");
  h.Append(std::span<const uint8_t>(key_)).Append(label).AppendU64(index);
  Drbg child;
  child.key_ = h.Finish();
  return child;
}

Digest Drbg::NextBlock() {
  TranscriptHasher h("investcoin/drbg/block");
  h.Append(std::span<const uint8_t>(key_)).AppendU64(counter_++);
  return h.Finish();
}

Drbg::result_type Drbg::operator()() {
  const Digest block = NextBlock();
  result_type out = 0;
  for (int i = 0; i < 8; ++i) {
    out = (out << 8) | block[static_cast<std::size_t>(i)];
  }
  return out;
}

mpz_class Drbg::Bits(std::size_t bits) {
  Bytes stream;
  while (stream.size() * 8 < bits) {
    const Digest block = NextBlock();
    stream.insert(stream.end(), block.begin(), block.end());
  }
  mpz_class out = FromBytes(stream);
  const std::size_t excess = stream.size() * 8 - bits;
  if (excess > 0) {
    out >>= static_cast<mp_bitcnt_t>(excess);
  }
  return out;
}

mpz_class Drbg::UniformBelow(const mpz_class& bound) {
  if (bound <= 0) {
    throw std::invalid_argument("UniformBelow requires a positive bound");
  }
  if (bound == 1) {
    return 0;
  }
  const mpz_class top = bound - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  for (;;) {
    mpz_class candidate = Bits(bits);
    if (candidate < bound) {
      return candidate;
    }
  }
}

mpz_class Drbg::UniformIn(const mpz_class& lo, const mpz_class& hi) {
  if (hi < lo) {
    throw std::invalid_argument("UniformIn requires lo <= hi");
  }
  return lo + UniformBelow(hi - lo + 1);
}

mpz_class Drbg::UniformNonZeroBelow(const mpz_class& bound) {
  if (bound <= 1) {
    throw std::invalid_argument("UniformNonZeroBelow requires bound > 1");
  }
  return 1 + UniformBelow(bound - 1);
}

}  // namespace investcoin
