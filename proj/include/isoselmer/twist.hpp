#pragma once

// Heegner twisting sets, the T_d partition, Legendre block matrices and the
// closed-form Selmer rank variation under E -> E^{-d}.

#include "isoselmer/arith.hpp"
#include "isoselmer/curve.hpp"
#include "isoselmer/f2.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isoselmer {

class SelmerSubspace;

/// q = 7 mod 8 and (-q/p) = 1 for every odd p in the bad support.
bool in_twisting_primes(const IsogenyCurve& e, Prime q);

/// Twisting primes up to bound, ascending.
std::vector<Prime> enumerate_Q(const IsogenyCurve& e, std::uint64_t bound);

/// Products of r distinct entries of q_list, r odd and r <= r_max, value <= d_bound, ascending.
std::vector<Int> generate_D(const std::vector<Prime>& q_list, unsigned r_max, Int d_bound);

/// d > 0 is a product of an odd number of distinct twisting primes.
bool in_twisting_set(const IsogenyCurve& e, Int d);

/// Primes of d in increasing order; d must be squarefree.
std::vector<Prime> prime_divisors(Int d);

struct BetaRecord {
    Prime q = 0;
    std::uint64_t beta = 0; // root of x^2 - 2a x + (a^2 - 4b) mod q
    int beta_symbol = 0;    // (beta / q)
    int cofactor_symbol = 0; // ((d/q) / q)
};

struct TdPartition {
    Int d = 0;
    std::vector<Prime> plus;  // ascending
    std::vector<Prime> minus; // ascending
    std::vector<BetaRecord> beta_digest;
};

/// Requires b > 0, a^2 - 4b > 0 and d in the twisting set. The conjugate flag
/// picks the other root a - s instead of a + s.
TdPartition partition_Td(const IsogenyCurve& e, Int d, bool conjugate_root = false);

struct TwistMatrices {
    std::vector<Prime> order; // T+ ascending, then T- ascending
    std::size_t plus_count = 0;
    F2Matrix A;
    F2Matrix A_tilde; // [1 | A]
    F2Matrix A_hat;   // [1 ; A_bar]
    F2Matrix A_bar;   // A + all-ones
};

/// a_{p,q} = 1 iff (q/p) = -1 for p != q, plus the identity on the T- block.
TwistMatrices build_matrices(const TdPartition& part);

/// 1 iff sign + sum of valuations at the primes of d is nonzero on V.
int eta_phi(const IsogenyCurve& e, Int d, const SelmerSubspace& relaxed);

struct DeltaReport {
    Int d = 0;
    unsigned omega = 0;
    SignCase sign = SignCase::I;
    std::optional<int> eta;             // cases III and IV only
    std::optional<TdPartition> partition; // cases III and IV only
    std::optional<TwistMatrices> matrices;
    std::string rank_matrix;            // "A", "A_tilde", "A_hat", "A_bar" or ""
    std::size_t rank = 0;
    int delta_phi = 0;
    int delta_phi_hat = 0;
    int theta_q = 0;
    int theta_inf = 0;
};

/// theta_q and theta_inf of the sign case.
std::pair<int, int> cassels_thetas(SignCase c);

/// Predicted dim Sel^phi(E^{-d}) - dim Sel^phi(E) and the same for the dual
/// isogeny on E'. d must lie in the twisting set.
DeltaReport delta_formulae(const IsogenyCurve& e, Int d);

/// As above, with the relaxed group already computed.
DeltaReport delta_formulae(const IsogenyCurve& e, Int d, const SelmerSubspace& relaxed);

} // namespace isoselmer
