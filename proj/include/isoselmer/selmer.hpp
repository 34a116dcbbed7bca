#pragma once

// phi-Selmer groups as F2 subspaces of Q^x / Q^x2, and the sign / valuation /
// residue functionals that cut them down.

#include "isoselmer/arith.hpp"
#include "isoselmer/curve.hpp"
#include "isoselmer/f2.hpp"
#include "isoselmer/local.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace isoselmer {

enum class LocalMode { exact, relaxed };

/// Local conditions for a phi-descent. Places outside `modes` are exact.
struct SelmerStructure {
    IsogenyCurve curve;
    std::map<Place, LocalMode> modes;
    /// Forces the condition at infinity to the trivial subgroup.
    bool plus = false;
    /// Extra primes added to the supporting set under their exact condition.
    std::vector<Prime> padding;

    bool relaxed(Place v) const;
};

/// All conditions exact: the phi-Selmer group of the curve.
SelmerStructure exact_structure(const IsogenyCurve& e);

/// Relaxed at infinity and at every prime dividing d.
SelmerStructure relaxed_structure(const IsogenyCurve& e, Int d);

/// Configured cap on |Sigma| (ISOSELMER_SIGMA_CAP, default 20, at most 62).
std::size_t sigma_cap();

/// A subspace of Q^x / Q^x2 spanned by classes supported on `support`.
///
/// The basis is the reduced echelon form of the iota-images, pivots ordered
/// sign bit first, then primes ascending, so equal subspaces have equal bases.
class SelmerSubspace {
public:
    SelmerSubspace() = default;
    /// Canonicalizes the span of `generators`, which must be supported on `support`.
    SelmerSubspace(std::vector<Prime> support, const std::vector<SquareClass>& generators);

    const std::vector<Prime>& support() const { return support_; }
    const std::vector<SquareClass>& basis() const { return basis_; }
    std::size_t dim() const { return basis_.size(); }

    /// Sign bit followed by one valuation bit per support prime.
    std::uint64_t iota(const SquareClass& c) const;
    SquareClass from_iota(std::uint64_t bits) const;

    bool contains(const SquareClass& c) const;
    /// All 2^dim members in increasing iota order.
    std::vector<SquareClass> members() const;

    /// Equal as subgroups of Q^x / Q^x2 (supports may differ).
    friend bool operator==(const SelmerSubspace& x, const SelmerSubspace& y) { return x.basis_ == y.basis_; }

private:
    std::vector<Prime> support_;
    std::vector<SquareClass> basis_;
};

std::string to_string(const SelmerSubspace& v);

/// Intersection of two subspaces.
SelmerSubspace intersect(const SelmerSubspace& x, const SelmerSubspace& y);

int eval_epsilon(const SquareClass& alpha);
int eval_lambda(const SquareClass& alpha, Prime p);
/// Residue symbol of the p-unit part of alpha; p must be odd.
int eval_gamma(const SquareClass& alpha, Prime p);

/// A sum of sign, valuation and residue functionals.
struct Functional {
    bool epsilon = false;
    std::vector<Prime> lambda;
    std::vector<Prime> gamma;

    static Functional sign() { return {true, {}, {}}; }
    static Functional lambda_at(Prime p) { return {false, {p}, {}}; }
    static Functional gamma_at(Prime p) { return {false, {}, {p}}; }
    static Functional gamma_plus_lambda(Prime p) { return {false, {p}, {p}}; }

    int operator()(const SquareClass& alpha) const;
};

std::string to_string(const Functional& f);

/// Runs the descent: enumerates the classes supported on Sigma and keeps those
/// satisfying every non-relaxed local condition (oracle images).
SelmerSubspace compute_selmer(const SelmerStructure& s);

/// Sel^phi(E/Q).
SelmerSubspace selmer_group(const IsogenyCurve& e);

/// Subspace of V on which every functional vanishes, found by evaluating the
/// functionals on the members of V themselves.
SelmerSubspace intersect_with_functionals(const SelmerSubspace& v, const std::vector<Functional>& fns);

enum class FunctionalKind { gamma, lambda, sign };

/// Rows are the functionals (one per prime of T, or the single sign row),
/// columns are the basis vectors of V. Residue rows go through the coefficient
/// vectors of the pairwise Legendre symbols, not through class evaluation.
F2Matrix restricted_matrix(const SelmerSubspace& v, FunctionalKind kind, const std::vector<Prime>& t = {});

/// Kernel of a restricted matrix, as a subspace of V.
SelmerSubspace matrix_kernel(const SelmerSubspace& v, const F2Matrix& m);

struct MasterSelmer {
    SelmerSubspace relaxed;  // Sel_{S_d}(E)
    SelmerSubspace curve;    // Sel(E)
    SelmerSubspace twist;    // Sel(E^{-d})
    SelmerSubspace common;   // Sel(E) intersected with Sel(E^{-d})
};

/// Both Selmer groups obtained from the relaxed group by functional
/// intersections only. d must lie in the twisting set of e.
MasterSelmer selmer_via_master(const IsogenyCurve& e, Int d);

} // namespace isoselmer
