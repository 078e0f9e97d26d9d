#include "investcoin/group.hpp"

#include <stdexcept>

#include "investcoin/errors.hpp"
#include "investcoin/random.hpp"

namespace investcoin {
namespace {

constexpr int kMillerRabinRounds = 64;
constexpr uint64_t kMaxSafePrimeCandidates = 4'000'000;
constexpr uint64_t kMaxGeneratorAttempts = 4096;
constexpr char kH1Tag[] = "gen/h1";
constexpr char kH2Tag[] = "gen/h2";

bool IsProbablePrime(const mpz_class& v, int rounds) {
  return mpz_probab_prime_p(v.get_mpz_t(), rounds) > 0;
}

bool IsSafePrimePair(const mpz_class& q) {
  // Cheap single-round screen on both before the full test.
  const mpz_class p = 2 * q + 1;
  if (!IsProbablePrime(q, 1) || !IsProbablePrime(p, 1)) {
    return false;
  }
  return IsProbablePrime(q, kMillerRabinRounds) && IsProbablePrime(p, kMillerRabinRounds);
}

bool FullOrder(const mpz_class& p, const mpz_class& q, const mpz_class& modulus,
               const mpz_class& g) {
  mpz_class t;
  mpz_powm(t.get_mpz_t(), g.get_mpz_t(), mpz_class(p * q).get_mpz_t(), modulus.get_mpz_t());
  if (t != 1) return false;
  mpz_powm(t.get_mpz_t(), g.get_mpz_t(), p.get_mpz_t(), modulus.get_mpz_t());
  if (t == 1) return false;
  mpz_powm(t.get_mpz_t(), g.get_mpz_t(), q.get_mpz_t(), modulus.get_mpz_t());
  return t != 1;
}

GroupElement DeriveGenerator(const mpz_class& p, const mpz_class& q, const mpz_class& modulus,
                             const std::string& base_tag) {
  for (uint64_t attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
    const std::string tag = attempt == 0 ? base_tag : base_tag + "/" + std::to_string(attempt);
    GroupElement g = HashToQr(p, modulus, tag);
    if (FullOrder(p, q, modulus, g.value)) {
      return g;
    }
  }
  throw ProtocolError(ErrorCode::kSearchExhausted, "no generator of order pq for " + base_tag);
}

}  // namespace

Exponent::Exponent(const mpz_class& raw, const GroupParams& params) {
  mpz_fdiv_r(value_.get_mpz_t(), raw.get_mpz_t(), params.exp_modulus.get_mpz_t());
}

Digest GroupParams::digest() const {
  TranscriptHasher h("investcoin/params");
  h.Append(q).Append(p).AppendU64(l).AppendU64(n).AppendU64(lambda).Append(q_prime);
  h.Append(h1.value).Append(h2.value);
  return h.Finish();
}

mpz_class DefaultQPrime(const mpz_class& q, const mpz_class& m, unsigned lambda) {
  const mpz_class denom = m * lambda;
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), mpz_class(q - 1).get_mpz_t(), denom.get_mpz_t());
  return out;
}

GroupParams MakeParams(const mpz_class& q, unsigned l, unsigned n, unsigned lambda,
                       const mpz_class& q_prime, const GroupElement& h1, const GroupElement& h2,
                       Bytes seed) {
  if (l == 0 || n == 0) {
    throw ProtocolError(ErrorCode::kParameterConflict, "l and n must be positive");
  }
  if (lambda < 3) {
    throw ProtocolError(ErrorCode::kParameterConflict,
                        "lambda must be at least 3 (two slots are dummy projects)");
  }
  GroupParams params;
  params.q = q;
  params.p = 2 * q + 1;
  params.modulus = params.p * params.p;
  params.exp_modulus = params.p * q;
  params.m = (mpz_class(1) << l) - 1;
  params.q_prime = q_prime;
  params.l = l;
  params.n = n;
  params.lambda = lambda;
  params.h1 = h1;
  params.h2 = h2;
  params.seed = std::move(seed);

  if (!IsSafePrimePair(q)) {
    throw ProtocolError(ErrorCode::kParameterConflict, "q and 2q+1 must both be prime");
  }
  if (q <= params.m * n) {
    throw ProtocolError(ErrorCode::kParameterConflict, "q must exceed m*n");
  }
  if (q_prime < 1 || q_prime * params.m * lambda >= q) {
    throw ProtocolError(ErrorCode::kParameterConflict, "need 1 <= q' < q/(m*lambda)");
  }
  if (!FullOrder(params.p, q, params.modulus, h1.value) ||
      !FullOrder(params.p, q, params.modulus, h2.value) || h1 == h2) {
    throw ProtocolError(ErrorCode::kParameterConflict,
                        "h1 and h2 must be distinct elements of order pq");
  }
  return params;
}

GroupParams GenerateParams(unsigned q_bits, unsigned l, unsigned n, unsigned lambda,
                           std::string_view seed) {
  if (q_bits < 3) {
    throw ProtocolError(ErrorCode::kParameterConflict, "q_bits must be at least 3");
  }
  if (l == 0 || n == 0) {
    throw ProtocolError(ErrorCode::kParameterConflict, "l and n must be positive");
  }
  if (lambda < 3) {
    throw ProtocolError(ErrorCode::kParameterConflict,
                        "lambda must be at least 3 (two slots are dummy projects)");
  }
  const mpz_class m = (mpz_class(1) << l) - 1;
  const mpz_class largest = (mpz_class(1) << q_bits) - 1;
  if (largest <= m * n) {
    throw ProtocolError(ErrorCode::kParameterConflict,
                        "no " + std::to_string(q_bits) + "-bit q can exceed m*n = " +
                            mpz_class(m * n).get_str());
  }

  Drbg rng(seed, "investcoin/params/safe-prime");
  const mpz_class top_bit = mpz_class(1) << (q_bits - 1);
  mpz_class q;
  bool found = false;
  for (uint64_t attempt = 0; attempt < kMaxSafePrimeCandidates; ++attempt) {
    mpz_class candidate = rng.Bits(q_bits) | top_bit | 1;
    if (candidate <= m * n) {
      continue;
    }
    // q = 1 mod 3 would make 2q+1 divisible by 3.
    if (candidate > 3 && candidate % 3 == 1) {
      continue;
    }
    if (IsSafePrimePair(candidate)) {
      q = candidate;
      found = true;
      break;
    }
  }
  if (!found) {
    throw ProtocolError(ErrorCode::kSearchExhausted,
                        "no safe prime found for q_bits=" + std::to_string(q_bits));
  }

  const mpz_class p = 2 * q + 1;
  const mpz_class modulus = p * p;
  const mpz_class q_prime = DefaultQPrime(q, m, lambda);
  if (q_prime < 1) {
    throw ProtocolError(ErrorCode::kParameterConflict,
                        "q too small for a positive verification bound q'");
  }
  const GroupElement h1 = DeriveGenerator(p, q, modulus, kH1Tag);
  GroupElement h2 = DeriveGenerator(p, q, modulus, kH2Tag);
  for (uint64_t attempt = 1; h2 == h1; ++attempt) {
    h2 = DeriveGenerator(p, q, modulus, std::string(kH2Tag) + "/distinct/" +
                                            std::to_string(attempt));
  }
  const std::string_view s = seed;
  return MakeParams(q, l, n, lambda, q_prime, h1, h2, Bytes(s.begin(), s.end()));
}

GroupParams ToyParams() { return GenerateParams(4, 2, 3, 3, "toy"); }

void OracleTable::Program(const std::string& tag, const GroupElement& value) {
  auto [it, inserted] = programmed_.emplace(tag, value);
  if (!inserted && it->second != value) {
    throw std::logic_error("oracle tag '" + tag + "' already programmed to another value");
  }
}

std::optional<GroupElement> OracleTable::Programmed(std::string_view tag) const {
  auto it = programmed_.find(tag);
  if (it == programmed_.end()) {
    return std::nullopt;
  }
  return it->second;
}

GroupElement HashToQr(const mpz_class& p, const mpz_class& modulus, std::string_view tag) {
  const std::size_t bits = mpz_sizeinbase(modulus.get_mpz_t(), 2) + 64;
  for (uint64_t counter = 0;; ++counter) {
    TranscriptHasher h("investcoin/hash-to-group");
    h.Append(p).Append(tag).AppendU64(counter);
    mpz_class r = h.Expand(bits) % modulus;
    if (r % p == 0) {
      continue;
    }
    GroupElement out;
    mpz_powm_ui(out.value.get_mpz_t(), r.get_mpz_t(), 2, modulus.get_mpz_t());
    return out;
  }
}

GroupElement HashToGroup(const OracleTable& oracle, const GroupParams& params,
                         std::string_view tag) {
  if (auto programmed = oracle.Programmed(tag)) {
    return *programmed;
  }
  return HashToQr(params.p, params.modulus, tag);
}

GroupElement Identity() { return GroupElement{1}; }

GroupElement Mul(const GroupParams& params, const GroupElement& a, const GroupElement& b) {
  GroupElement out;
  out.value = a.value * b.value;
  mpz_mod(out.value.get_mpz_t(), out.value.get_mpz_t(), params.modulus.get_mpz_t());
  return out;
}

GroupElement Inverse(const GroupParams& params, const GroupElement& g) {
  GroupElement out;
  if (mpz_invert(out.value.get_mpz_t(), g.value.get_mpz_t(), params.modulus.get_mpz_t()) == 0) {
    throw std::domain_error("element is not invertible mod p^2");
  }
  return out;
}

GroupElement Pow(const GroupParams& params, const GroupElement& g, const Exponent& e) {
  GroupElement out;
  mpz_powm(out.value.get_mpz_t(), g.value.get_mpz_t(), e.value().get_mpz_t(),
           params.modulus.get_mpz_t());
  return out;
}

GroupElement Pow(const GroupParams& params, const GroupElement& g, const mpz_class& e) {
  if (sgn(e) >= 0) {
    GroupElement out;
    mpz_powm(out.value.get_mpz_t(), g.value.get_mpz_t(), e.get_mpz_t(),
             params.modulus.get_mpz_t());
    return out;
  }
  const GroupElement inv = Inverse(params, g);
  const mpz_class magnitude = -e;
  GroupElement out;
  mpz_powm(out.value.get_mpz_t(), inv.value.get_mpz_t(), magnitude.get_mpz_t(),
           params.modulus.get_mpz_t());
  return out;
}

GroupElement Product(const GroupParams& params, std::span<const WeightedElement> terms) {
  GroupElement acc = Identity();
  for (const auto& [g, e] : terms) {
    acc = Mul(params, acc, Pow(params, g, e));
  }
  return acc;
}

bool IsMember(const GroupParams& params, const GroupElement& g) {
  if (g.value <= 0 || g.value >= params.modulus) {
    return false;
  }
  if (g.value % params.p == 0) {
    return false;
  }
  mpz_class t;
  mpz_powm(t.get_mpz_t(), g.value.get_mpz_t(), params.exp_modulus.get_mpz_t(),
           params.modulus.get_mpz_t());
  return t == 1;
}

bool HasFullOrder(const GroupParams& params, const GroupElement& g) {
  if (g.value <= 0 || g.value >= params.modulus) {
    return false;
  }
  return FullOrder(params.p, params.q, params.modulus, g.value);
}

}  // namespace investcoin
