#include "investcoin/psa.hpp"

#include "investcoin/errors.hpp"

namespace investcoin {

GroupElement PsaEncWithBase(const GroupParams& params, const GroupElement& base, const PsaKey& key,
                            const mpz_class& x) {
  GroupElement plain;
  plain.value = 1 + params.p * x;
  mpz_mod(plain.value.get_mpz_t(), plain.value.get_mpz_t(), params.modulus.get_mpz_t());
  return Mul(params, plain, Pow(params, base, key.s));
}

PsaCiphertext PsaEnc(const GroupParams& params, const OracleTable& oracle, const PsaKey& key,
                     std::string_view tag, const mpz_class& x) {
  const GroupElement base = HashToGroup(oracle, params, tag);
  return PsaCiphertext{PsaEncWithBase(params, base, key, x), std::string(tag)};
}

mpz_class ExtractSum(const GroupParams& params, const GroupElement& aggregate,
                     const mpz_class& bound) {
  mpz_class v;
  mpz_mod(v.get_mpz_t(), aggregate.value.get_mpz_t(), params.modulus.get_mpz_t());
  if (v % params.p != 1) {
    throw ProtocolError(ErrorCode::kMalformedAggregate, "aggregate is not 1 mod p");
  }
  mpz_class sum = (v - 1) / params.p;
  if (2 * sum > params.p) {
    sum -= params.p;
  }
  if (abs(sum) > bound) {
    throw ProtocolError(ErrorCode::kSumOutOfBound,
                        "decoded sum " + sum.get_str() + " exceeds bound " + bound.get_str());
  }
  return sum;
}

mpz_class PsaDec(const GroupParams& params, const OracleTable& oracle, const PsaKey& key,
                 std::string_view tag, std::span<const PsaCiphertext> ciphers,
                 const mpz_class& bound) {
  GroupElement acc = Pow(params, HashToGroup(oracle, params, tag), key.s);
  for (const auto& cipher : ciphers) {
    if (cipher.tag != tag) {
      throw ProtocolError(ErrorCode::kMalformedAggregate,
                          "cipher tag '" + cipher.tag + "' does not match '" + std::string(tag) +
                              "'");
    }
    acc = Mul(params, acc, cipher.c);
  }
  return ExtractSum(params, acc, bound);
}

PsaKey KeysetComplement(const GroupParams& params, std::span<const PsaKey> keys) {
  mpz_class sum = 0;
  for (const auto& key : keys) {
    sum += key.s.value();
  }
  return PsaKey{params.exp(-sum)};
}

}  // namespace investcoin
