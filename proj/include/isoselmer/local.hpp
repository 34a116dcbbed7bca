#pragma once

// Local Kummer images L_v = im(E'(Q_v) -> Q_v^x / Q_v^x2) of the 2-isogeny.

#include "isoselmer/arith.hpp"
#include "isoselmer/curve.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isoselmer {

/// A subgroup of Q_v^x / Q_v^x2, as a bitmask over canonical indices.
class LocalSubgroup {
public:
    LocalSubgroup() = default;
    LocalSubgroup(Place v, std::uint8_t mask) : place_(v), mask_(mask) {}

    static LocalSubgroup trivial(Place v) { return {v, 1}; }
    static LocalSubgroup full(Place v);
    /// Subgroup generated by the given canonical indices.
    static LocalSubgroup generated_by(Place v, const std::vector<unsigned>& generators);

    Place place() const { return place_; }
    std::uint8_t mask() const { return mask_; }
    bool contains(unsigned index) const { return (mask_ >> index) & 1; }
    bool contains(const LocalClassRep& c) const { return c.place == place_ && contains(c.index); }
    unsigned size() const;
    /// log2 of size(); only meaningful when is_subgroup().
    unsigned dim() const;
    bool is_subgroup() const;
    std::vector<LocalClassRep> members() const;

    friend bool operator==(const LocalSubgroup&, const LocalSubgroup&) = default;

private:
    Place place_{};
    std::uint8_t mask_ = 1;
};

std::string to_string(const LocalSubgroup& g);

struct TorsorProblem {
    SquareClass alpha;
    IsogenyCurve curve;
    Place place;
};

/// Whether alpha w^2 = alpha^2 - 2 a alpha s^2 + (a^2 - 4b) s^4 has a point over
/// Q_v (including the points at s = infinity).
bool torsor_solvable(const TorsorProblem& t);

/// Precision bound for the p-adic search; exceeding it throws InternalError.
unsigned torsor_depth_bound(const IsogenyCurve& e, Prime p);

/// The set of canonical classes whose torsor is locally solvable. Memoized per
/// (a, b, v); thread-safe.
LocalSubgroup kummer_image_oracle(const IsogenyCurve& e, Place v);

/// e is quadratic_twist(base, -d) and the fast path may use q | d.
struct TwistContext {
    IsogenyCurve base;
    Int d = 0;
};

/// Closed-form image: good odd primes, the real place, and q | d on a twist.
/// Empty when no closed form covers the place.
std::optional<LocalSubgroup> kummer_image_fast(const IsogenyCurve& e, Place v,
                                               const std::optional<TwistContext>& context = std::nullopt);

/// Fast path when available, oracle otherwise.
LocalSubgroup kummer_image(const IsogenyCurve& e, Place v, const std::optional<TwistContext>& context = std::nullopt);

} // namespace isoselmer
