#include "isoselmer/selmer.hpp"

#include "isoselmer/errors.hpp"
#include "isoselmer/twist.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

namespace isoselmer {

bool SelmerStructure::relaxed(Place v) const
{
    const auto it = modes.find(v);
    return it != modes.end() && it->second == LocalMode::relaxed;
}

SelmerStructure exact_structure(const IsogenyCurve& e) { return {e, {}, false, {}}; }

SelmerStructure relaxed_structure(const IsogenyCurve& e, Int d)
{
    SelmerStructure s = exact_structure(e);
    s.modes[Place::infinity()] = LocalMode::relaxed;
    for (Prime q : prime_divisors(d))
        s.modes[Place::prime(q)] = LocalMode::relaxed;
    return s;
}

std::size_t sigma_cap()
{
    const char* env = std::getenv("ISOSELMER_SIGMA_CAP");
    if (env == nullptr || *env == '\0')
        return 20;
    const auto parsed = parse_int(env);
    if (!parsed || *parsed < 1 || *parsed > 62)
        throw DomainError(std::string("ISOSELMER_SIGMA_CAP must be an integer in [1, 62], got \"") + env + "\"");
    return static_cast<std::size_t>(*parsed);
}

namespace {

// Reduced echelon form; the pivot of each row is its lowest set bit.
std::vector<std::uint64_t> reduced_echelon(std::vector<std::uint64_t> rows)
{
    std::vector<std::uint64_t> basis;
    for (std::uint64_t r : rows) {
        for (std::uint64_t b : basis)
            if (r & (b & -b))
                r ^= b;
        if (r == 0)
            continue;
        const std::uint64_t pivot = r & -r;
        for (std::uint64_t& b : basis)
            if (b & pivot)
                b ^= r;
        basis.push_back(r);
    }
    std::sort(basis.begin(), basis.end(), [](std::uint64_t x, std::uint64_t y) { return (x & -x) < (y & -y); });
    return basis;
}

std::vector<Prime> merged(std::vector<Prime> x, const std::vector<Prime>& y)
{
    x.insert(x.end(), y.begin(), y.end());
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    return x;
}

} // namespace

SelmerSubspace::SelmerSubspace(std::vector<Prime> support, const std::vector<SquareClass>& generators)
    : support_(std::move(support))
{
    if (support_.size() > 62)
        throw ResourceError("supporting set of size " + std::to_string(support_.size()) + " exceeds 62 primes");
    std::vector<std::uint64_t> rows;
    rows.reserve(generators.size());
    for (const SquareClass& g : generators)
        rows.push_back(iota(g));
    for (std::uint64_t r : reduced_echelon(std::move(rows)))
        basis_.push_back(from_iota(r));
}

std::uint64_t SelmerSubspace::iota(const SquareClass& c) const
{
    std::uint64_t bits = c.negative ? 1 : 0;
    for (Prime p : c.primes) {
        const auto it = std::lower_bound(support_.begin(), support_.end(), p);
        if (it == support_.end() || *it != p)
            throw DomainError(to_string(c) + " is not supported on the given prime set");
        bits |= std::uint64_t{1} << (1 + (it - support_.begin()));
    }
    return bits;
}

SquareClass SelmerSubspace::from_iota(std::uint64_t bits) const
{
    SquareClass c;
    c.negative = bits & 1;
    for (std::size_t i = 0; i < support_.size(); ++i)
        if ((bits >> (i + 1)) & 1)
            c.primes.push_back(support_[i]);
    return c;
}

bool SelmerSubspace::contains(const SquareClass& c) const
{
    for (Prime p : c.primes)
        if (!std::binary_search(support_.begin(), support_.end(), p))
            return false;
    std::uint64_t r = iota(c);
    for (const SquareClass& b : basis_) {
        const std::uint64_t bi = iota(b);
        if (r & (bi & -bi))
            r ^= bi;
    }
    return r == 0;
}

std::vector<SquareClass> SelmerSubspace::members() const
{
    if (dim() > 24)
        throw ResourceError("refusing to list 2^" + std::to_string(dim()) + " Selmer elements");
    std::vector<std::uint64_t> rows;
    for (const SquareClass& b : basis_)
        rows.push_back(iota(b));
    std::vector<std::uint64_t> all;
    all.reserve(std::size_t{1} << dim());
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << dim()); ++m) {
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if ((m >> i) & 1)
                x ^= rows[i];
        all.push_back(x);
    }
    std::sort(all.begin(), all.end());
    std::vector<SquareClass> out;
    out.reserve(all.size());
    for (std::uint64_t x : all)
        out.push_back(from_iota(x));
    return out;
}

std::string to_string(const SelmerSubspace& v)
{
    std::string s = "<";
    for (std::size_t i = 0; i < v.basis().size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(v.basis()[i]);
    }
    return s + ">";
}

SelmerSubspace intersect(const SelmerSubspace& x, const SelmerSubspace& y)
{
    std::vector<SquareClass> common;
    for (const SquareClass& c : x.members())
        if (y.contains(c))
            common.push_back(c);
    return {merged(x.support(), y.support()), common};
}

int eval_epsilon(const SquareClass& alpha) { return alpha.negative ? 1 : 0; }

int eval_lambda(const SquareClass& alpha, Prime p) { return alpha.contains(p) ? 1 : 0; }

int eval_gamma(const SquareClass& alpha, Prime p)
{
    if (p == 2)
        throw DomainError("eval_gamma: the residue functional is undefined at 2");
    if (!is_prime(p))
        throw DomainError("eval_gamma: " + std::to_string(p) + " is not prime");
    // Unit part = alpha / p^{v_p}, a product of small signed factors mod p.
    Int unit = alpha.negative ? -1 : 1;
    std::uint64_t residue = detail::reduce(unit, p);
    for (Prime r : alpha.primes)
        if (r != p)
            residue = detail::mulmod(residue, r % p, p);
    return legendre(static_cast<Int>(residue), p) == 1 ? 0 : 1;
}

int Functional::operator()(const SquareClass& alpha) const
{
    int x = epsilon ? eval_epsilon(alpha) : 0;
    for (Prime p : lambda)
        x ^= eval_lambda(alpha, p);
    for (Prime p : gamma)
        x ^= eval_gamma(alpha, p);
    return x;
}

std::string to_string(const Functional& f)
{
    std::string s;
    auto add = [&s](const std::string& term) {
        if (!s.empty())
            s += " + ";
        s += term;
    };
    if (f.epsilon)
        add("eps");
    for (Prime p : f.gamma)
        add("gamma_" + std::to_string(p));
    for (Prime p : f.lambda)
        add("lambda_" + std::to_string(p));
    return s.empty() ? "0" : s;
}

SelmerSubspace compute_selmer(const SelmerStructure& s)
{
    const IsogenyCurve& e = s.curve;
    std::vector<Prime> relaxed_primes;
    for (const auto& [v, mode] : s.modes)
        if (!v.is_infinite() && mode == LocalMode::relaxed)
            relaxed_primes.push_back(v.p);
    const std::vector<Prime> sigma = merged(merged(e.bad_support(), relaxed_primes), s.padding);
    const std::size_t cap = sigma_cap();
    if (sigma.size() > cap)
        throw ResourceError("supporting set has " + std::to_string(sigma.size()) + " primes, cap is " +
                            std::to_string(cap) + " (set ISOSELMER_SIGMA_CAP to raise it)");

    struct Condition {
        Place place;
        std::uint8_t allowed;
        std::vector<unsigned> generator_index; // local index of each iota generator
    };
    std::vector<SquareClass> generators{SquareClass::minus_one()};
    for (Prime p : sigma)
        generators.push_back(SquareClass::of_prime(p));

    std::vector<Condition> conditions;
    auto add_condition = [&](Place v, std::uint8_t allowed) {
        Condition c{v, allowed, {}};
        for (const SquareClass& g : generators)
            c.generator_index.push_back(localize(g, v).index);
        conditions.push_back(std::move(c));
    };
    const Place inf = Place::infinity();
    if (s.plus)
        add_condition(inf, LocalSubgroup::trivial(inf).mask());
    else if (!s.relaxed(inf))
        add_condition(inf, kummer_image_oracle(e, inf).mask());
    for (Prime p : sigma)
        if (!s.relaxed(Place::prime(p)))
            add_condition(Place::prime(p), kummer_image_oracle(e, Place::prime(p)).mask());

    // Gray code walk over all classes supported on Sigma.
    const std::size_t n = generators.size();
    std::vector<unsigned> local(conditions.size(), 0);
    std::vector<std::uint64_t> members;
    std::uint64_t bits = 0;
    for (std::uint64_t step = 0;; ++step) {
        bool ok = true;
        for (std::size_t i = 0; i < conditions.size() && ok; ++i)
            ok = (conditions[i].allowed >> local[i]) & 1;
        if (ok)
            members.push_back(bits);
        if (step + 1 == (std::uint64_t{1} << n))
            break;
        const unsigned flip = static_cast<unsigned>(std::countr_zero(step + 1));
        bits ^= std::uint64_t{1} << flip;
        for (std::size_t i = 0; i < conditions.size(); ++i)
            local[i] ^= conditions[i].generator_index[flip];
    }
    if (members.size() != std::bit_floor(members.size()))
        throw InternalError("Selmer member count " + std::to_string(members.size()) + " is not a power of two");

    SelmerSubspace shell(sigma, {});
    std::vector<SquareClass> classes;
    classes.reserve(members.size());
    for (std::uint64_t m : members)
        classes.push_back(shell.from_iota(m));
    SelmerSubspace v(sigma, classes);
    if ((std::size_t{1} << v.dim()) != members.size())
        throw InternalError("Selmer members do not form a subgroup");
    return v;
}

SelmerSubspace selmer_group(const IsogenyCurve& e) { return compute_selmer(exact_structure(e)); }

SelmerSubspace intersect_with_functionals(const SelmerSubspace& v, const std::vector<Functional>& fns)
{
    std::vector<SquareClass> kept;
    for (const SquareClass& c : v.members()) {
        bool ok = true;
        for (const Functional& f : fns)
            if (f(c) != 0) {
                ok = false;
                break;
            }
        if (ok)
            kept.push_back(c);
    }
    SelmerSubspace w(v.support(), kept);
    if ((std::size_t{1} << w.dim()) != kept.size())
        throw InternalError("functional kernel is not a subgroup");
    return w;
}

F2Matrix restricted_matrix(const SelmerSubspace& v, FunctionalKind kind, const std::vector<Prime>& t)
{
    const auto& basis = v.basis();
    if (kind == FunctionalKind::sign) {
        F2Matrix m(1, basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j)
            m.set(0, j, eval_epsilon(basis[j]));
        return m;
    }
    F2Matrix m(t.size(), basis.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Prime q = t[i];
        if (kind == FunctionalKind::lambda) {
            for (std::size_t j = 0; j < basis.size(); ++j)
                m.set(i, j, eval_lambda(basis[j], q));
            continue;
        }
        if (q == 2)
            throw DomainError("restricted_matrix: no residue row at 2");
        // gamma_q = c_inf * eps + sum over p != q of c_p * lambda_p.
        const int c_inf = legendre(-1, q) == -1 ? 1 : 0;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            int x = c_inf & eval_epsilon(basis[j]);
            for (Prime p : v.support())
                if (p != q && eval_lambda(basis[j], p))
                    x ^= legendre(static_cast<Int>(p), q) == -1 ? 1 : 0;
            m.set(i, j, x);
        }
    }
    return m;
}

SelmerSubspace matrix_kernel(const SelmerSubspace& v, const F2Matrix& m)
{
    if (m.cols() != v.dim())
        throw DomainError("matrix_kernel: column count differs from dim V");
    std::vector<SquareClass> gens;
    for (const std::vector<bool>& x : f2_kernel(m)) {
        SquareClass c;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j])
                c = c * v.basis()[j];
        gens.push_back(c);
    }
    return {v.support(), gens};
}

MasterSelmer selmer_via_master(const IsogenyCurve& e, Int d)
{
    if (!in_twisting_set(e, d))
        throw DomainError(to_string(d) + " is not in the twisting set of " + e.spec());
    const std::vector<Prime> primes = prime_divisors(d);
    MasterSelmer out;
    out.relaxed = compute_selmer(relaxed_structure(e, d));

    std::vector<Functional> lambdas;
    for (Prime q : primes)
        lambdas.push_back(Functional::lambda_at(q));
    std::vector<Functional> plus_lambdas = lambdas;
    plus_lambdas.push_back(Functional::sign());

    switch (sign_case(e)) {
    case SignCase::I: {
        out.curve = intersect_with_functionals(out.relaxed, plus_lambdas);
        std::vector<Functional> both = plus_lambdas;
        for (Prime q : primes)
            both.push_back(Functional::gamma_at(q));
        out.twist = intersect_with_functionals(out.relaxed, both);
        out.common = out.curve;
        break;
    }
    case SignCase::II:
        out.curve = intersect_with_functionals(out.relaxed, lambdas);
        out.twist = out.relaxed;
        out.common = out.curve;
        break;
    case SignCase::III:
    case SignCase::IV: {
        const bool iii = sign_case(e) == SignCase::III;
        const TdPartition part = partition_Td(e, d);
        std::vector<Functional> twist_fns;
        if (iii)
            twist_fns.push_back(Functional::sign());
        for (Prime q : part.plus)
            twist_fns.push_back(Functional::gamma_at(q));
        for (Prime q : part.minus)
            twist_fns.push_back(Functional::gamma_plus_lambda(q));
        out.curve = intersect_with_functionals(out.relaxed, iii ? lambdas : plus_lambdas);
        out.twist = intersect_with_functionals(out.relaxed, twist_fns);
        out.common = intersect_with_functionals(out.relaxed, plus_lambdas);
        break;
    }
    }
    return out;
}

} // namespace isoselmer
