#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "investcoin/errors.hpp"
#include "investcoin/group.hpp"
#include "investcoin/keygen.hpp"
#include "investcoin/pedersen.hpp"
#include "investcoin/psa.hpp"
#include "investcoin/range_proof.hpp"
#include "investcoin/schedule.hpp"

namespace investcoin {

// Index conventions: slot vectors (amounts, ciphers, betas) have lambda + 1
// entries for j = 0..lambda. Project vectors (commitments, c~, range proofs,
// randomness, alphas) have lambda entries, entry j - 1 holding project j.

std::string ProjectTag(unsigned j);       // t_j
std::string RandomnessTag(unsigned j);    // t~_j; t~_0 is the board tag of the second key family
std::string RangeContext(InvestorId investor, unsigned project);

// Public part of the system after setup.
struct SystemSetup {
  GroupParams params;
  OracleTable oracle;
  CommitKey commit_key;
  std::vector<std::string> tags;           // t_0..t_lambda
  std::vector<std::string> tilde_tags;     // t~_0..t~_lambda
  std::vector<GroupElement> tag_bases;     // H(t_j)
  std::vector<GroupElement> tilde_bases;   // H(t~_j)

  unsigned lambda() const { return params.lambda; }
  bool is_dummy(unsigned j) const { return j + 1 >= params.lambda; }
};

// Evaluates H on all round tags. Call after the oracle is programmed.
void CacheTagBases(SystemSetup& setup);

// sk_0 = (s_0, beta_0..beta_lambda) plus the reported column sums of both key
// families, which the administrator needs for blackboard verification.
struct AdminSecret {
  std::vector<mpz_class> betas;
  PsaKey s0;
  PsaKey s0_tilde;
  std::vector<Exponent> column_sums;
  std::vector<Exponent> column_sums_tilde;
};

struct InvestorKey {
  InvestorId id = 0;
  PsaKey s;
  PsaKey s_tilde;
};

struct Deployment {
  SystemSetup setup;
  AdminSecret admin;
  std::vector<InvestorKey> investor_keys;
  KeygenResult keygen;
  KeygenResult keygen_tilde;
};

// Samples betas, programs H(t_{lambda-1}), H(t_lambda) and their t~
// counterparts so that the verification products equal 1, then runs key
// generation for both key families.
Deployment DieSet(const GroupParams& params, Drbg& rng);

// prod_{j=0}^{lambda} H(t_j)^{beta_j} == 1 and prod_{j=1}^{lambda} H(t~_j)^{beta_j} == 1.
bool VerificationProductsHold(const SystemSetup& setup, const std::vector<mpz_class>& betas);

struct InvestorState {
  InvestorKey key;
  std::vector<mpz_class> amounts;     // x_{i,0..lambda}
  std::vector<mpz_class> randomness;  // r_{i,1..lambda}

  const mpz_class& amount(unsigned j) const { return amounts[j]; }
  const mpz_class& rand(unsigned j) const { return randomness[j - 1]; }
};

// project_amounts holds x_{i,1..lambda}. Randomness is drawn from [0, m];
// kFull is rejected with kParameterConflict because c~ only carries r mod p.
InvestorState MakeInvestor(const SystemSetup& setup, const InvestorKey& key,
                           const std::vector<mpz_class>& project_amounts, Drbg& rng,
                           RandomnessRange range = RandomnessRange::kInvestmentRange);

// Throws kAmountOutOfRange unless x_{i,0} and the dummy slots are 0 and the
// rest lie in [0, m].
void ValidateAmounts(const SystemSetup& setup, const std::vector<mpz_class>& amounts);

std::vector<PsaCiphertext> DieEnc(const SystemSetup& setup, const InvestorState& investor);

struct CommitmentBundle {
  std::vector<Commitment> coms;        // com_{i,1..lambda}
  std::vector<PsaCiphertext> tilde;    // c~_{i,1..lambda}
};

CommitmentBundle DieCom(const SystemSetup& setup, const InvestorState& investor);

std::vector<RangeProof> DieTesProve(const SystemSetup& setup, const InvestorState& investor,
                                    Drbg& rng);
std::vector<bool> DieTesVerify(const SystemSetup& setup, InvestorId investor,
                               const std::vector<Commitment>& coms,
                               const std::vector<RangeProof>& proofs);

struct Claim {
  mpz_class value;    // C_i or E_i
  mpz_class opening;  // D_i or F_i
};

Claim PaymentClaim(const InvestorState& investor);
Claim ReturnClaim(const InvestorState& investor, const std::vector<mpz_class>& alphas);

// Everything an investor sends in the first batch.
struct PayBatch {
  InvestorId investor = 0;
  std::vector<PsaCiphertext> ciphers;  // c_{i,0..lambda}
  CommitmentBundle bundle;
  std::vector<RangeProof> proofs;
  Claim claim;
};

struct ReturnBatch {
  InvestorId investor = 0;
  Claim claim;
};

struct ConsistencyResult {
  bool ok = false;
  std::optional<ErrorCode> failure;  // kConsistencyAbort, kMalformedAggregate or kSumOutOfBound
  mpz_class a;
  mpz_class b;
};

// First check of DIEUnvPay: A_i and B_i from the beta-weighted cipher products
// (the H parts cancel), then Unv(prod com^beta, A_i, B_i). pinned_zero replaces
// the investor's c_{i,0}.
ConsistencyResult DieUnvPayConsistency(const SystemSetup& setup, const AdminSecret& admin,
                                       const PayBatch& batch, const GroupElement& pinned_zero);

// b_P = Unv(prod com, C_i, D_i).
bool DieUnvPay(const SystemSetup& setup, const std::vector<Commitment>& coms, const Claim& claim);

// X_j = PSADec_{s_0}(t_j, column j) with bound m n for j = 0..lambda.
// column_ciphers[j][i] holds investor i's cipher for tag t_j. Throws
// kMissingCipher for a short column and kZeroSlotViolation if X_0 != 0.
std::vector<mpz_class> DieDec(const SystemSetup& setup, const AdminSecret& admin,
                              const std::vector<std::vector<PsaCiphertext>>& column_ciphers,
                              std::size_t expected_investors, Schedule schedule = Schedule::kSerial);

// Throws kReturnFactorOutOfRange unless every |alpha_j| <= q' and the dummy
// factors are 1.
void ValidateAlphas(const SystemSetup& setup, const std::vector<mpz_class>& alphas);

// b_R = Unv(prod com^alpha, E_i, F_i).
bool DieUnvRet(const SystemSetup& setup, const std::vector<Commitment>& coms,
               const std::vector<mpz_class>& alphas, const Claim& claim);

}  // namespace investcoin
