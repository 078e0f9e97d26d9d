#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "investcoin/protocol.hpp"
#include "investcoin/random.hpp"

namespace investcoin {

// Malicious investor strategies. Each maps to one or more detection paths.
enum class Behaviour {
  kHonest,
  kMismatch,        // encrypts x + delta at one project but commits to x
  kNegativeAmount,  // encrypts and commits to -delta at one project, forges the range proof
  kFreshKey,        // encrypts under a self-chosen key instead of s_i
  kWrongTags,       // encrypts under H(t') for tags t' it was not given
  kInflateClaim,    // adds delta to one of C, D, E, F
  kWithhold,        // sends no payment batch
};

enum class ClaimField { kC, kD, kE, kF };

std::string_view BehaviourName(Behaviour behaviour);
std::optional<Behaviour> ParseBehaviour(std::string_view name);
std::string_view ClaimFieldName(ClaimField field);
std::optional<ClaimField> ParseClaimField(std::string_view name);

struct AdversarySpec {
  InvestorId investor = 0;
  Behaviour behaviour = Behaviour::kHonest;
  unsigned project = 1;
  mpz_class delta = 1;
  ClaimField field = ClaimField::kC;
};

// Builds the payment batch the adversary sends in place of the honest one.
// Returns nullopt for kWithhold.
std::optional<PayBatch> AdversarialPayBatch(const SystemSetup& setup, const InvestorState& investor,
                                            const AdversarySpec& spec, Drbg& rng);

// Return claim for the second batch, with kInflateClaim applied to E or F.
Claim AdversarialReturnClaim(const InvestorState& investor, const std::vector<mpz_class>& alphas,
                             const AdversarySpec& spec);

// OR proof built as if `claimed` opened the chosen branch, without checking it.
OrProof UncheckedOrProof(const GroupParams& params, const OrStatement& stmt,
                         const Exponent& claimed, WitnessPosition position, Drbg& rng,
                         std::string_view context);

// Range proof over arbitrary digits d_k with sum d_k 2^k = x. Binary digits get
// honest bit proofs, the others unchecked ones. Recombination holds.
RangeProof ForgeDigits(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                       const mpz_class& r, const std::vector<mpz_class>& digits,
                       std::string_view context, Drbg& rng);

// Honest proof over l + 1 bits, for x in [2^l, 2^{l+1}).
RangeProof ForgeExtraBit(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                         const mpz_class& r, unsigned l, std::string_view context, Drbg& rng);

// Honest l-bit proof of (x mod pq) mod 2^l with the target randomness r; for
// x = -1 this is the low-bit decomposition of pq - 1.
RangeProof ForgeLowBits(const GroupParams& params, const CommitKey& key, const mpz_class& x,
                        const mpz_class& r, unsigned l, std::string_view context, Drbg& rng);

// Digits of a negative x: the lowest digit carries the sign, i.e. x = d_0 + sum_{k>0} b_k 2^k
// with d_0 < 0.
std::vector<mpz_class> NegativeDigits(const mpz_class& x, unsigned l);

}  // namespace investcoin
