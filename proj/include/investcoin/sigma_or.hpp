#pragma once

#include <string_view>
#include <utility>

#include "investcoin/group.hpp"
#include "investcoin/random.hpp"

namespace investcoin {

// Claim: the prover knows log_h R or log_h S.
struct OrStatement {
  GroupElement h;
  GroupElement R;
  GroupElement S;
};

struct OrProof {
  GroupElement a1;
  GroupElement a2;
  Exponent v1;
  Exponent v2;
  Exponent w1;
  Exponent w2;
  // Challenge. Recomputed by the non-interactive verifier, never trusted.
  Exponent v;
};

enum class WitnessPosition { kFirst = 1, kSecond = 2 };

// Prover randomness: z for the real branch, (v_sim, w_sim) for the simulated
// one. Sampled up front so proofs can be computed in any order.
struct OrNonces {
  Exponent z;
  Exponent v_sim;
  Exponent w_sim;
};

OrNonces SampleOrNonces(const GroupParams& params, Drbg& rng);

class OrProver {
 public:
  // Throws ProtocolError(kWitnessMismatch) unless h^witness equals R (first)
  // or S (second).
  OrProver(const GroupParams& params, const OrStatement& stmt, const Exponent& witness,
           WitnessPosition position, const OrNonces& nonces);

  const GroupElement& a1() const { return a1_; }
  const GroupElement& a2() const { return a2_; }

  OrProof Respond(const Exponent& challenge) const;

 private:
  const GroupParams* params_;
  Exponent witness_;
  WitnessPosition position_;
  OrNonces nonces_;
  GroupElement a1_;
  GroupElement a2_;
};

// Fiat-Shamir challenge over params digest | h | R | S | a1 | a2 | context,
// reduced mod pq with zero mapped to 1.
Exponent OrChallenge(const GroupParams& params, const OrStatement& stmt, const GroupElement& a1,
                     const GroupElement& a2, std::string_view context);

OrProof OrProve(const GroupParams& params, const OrStatement& stmt, const Exponent& witness,
                WitnessPosition position, const OrNonces& nonces, std::string_view context);
OrProof OrProve(const GroupParams& params, const OrStatement& stmt, const Exponent& witness,
                WitnessPosition position, Drbg& rng, std::string_view context);

// Checks v = v1 + v2, h^w1 = a1 R^v1, h^w2 = a2 S^v2 against a verifier-chosen v.
bool OrVerifyInteractive(const GroupParams& params, const OrStatement& stmt, const OrProof& proof,
                         const Exponent& challenge);

// Non-interactive form: v is recomputed from the transcript and context.
bool OrVerify(const GroupParams& params, const OrStatement& stmt, const OrProof& proof,
              std::string_view context);

}  // namespace investcoin
