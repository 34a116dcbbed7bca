#include "isoselmer/twist.hpp"

#include "isoselmer/errors.hpp"
#include "isoselmer/selmer.hpp"

#include <algorithm>
#include <tuple>

namespace isoselmer {

bool in_twisting_primes(const IsogenyCurve& e, Prime q)
{
    if (q % 8 != 7 || !is_prime(q))
        return false;
    for (Prime p : e.bad_support())
        if (p != 2 && legendre(-static_cast<Int>(q), p) != 1)
            return false;
    return true;
}

std::vector<Prime> enumerate_Q(const IsogenyCurve& e, std::uint64_t bound)
{
    std::vector<Prime> out;
    for (Prime q : primes_up_to(bound))
        if (in_twisting_primes(e, q))
            out.push_back(q);
    return out;
}

namespace {

void extend_products(const std::vector<Prime>& q, std::size_t start, unsigned used, unsigned r_max, Int value,
                     Int bound, std::vector<Int>& out)
{
    if (used % 2 == 1)
        out.push_back(value);
    if (used == r_max)
        return;
    for (std::size_t i = start; i < q.size(); ++i) {
        const Int next = value * static_cast<Int>(q[i]);
        if (next > bound)
            break; // q is ascending
        extend_products(q, i + 1, used + 1, r_max, next, bound, out);
    }
}

} // namespace

std::vector<Int> generate_D(const std::vector<Prime>& q_list, unsigned r_max, Int d_bound)
{
    if (r_max % 2 == 0)
        throw DomainError("generate_D: r_max must be odd");
    std::vector<Prime> q = q_list;
    std::sort(q.begin(), q.end());
    std::vector<Int> out;
    extend_products(q, 0, 0, r_max, 1, d_bound, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Prime> prime_divisors(Int d)
{
    std::vector<Prime> out;
    for (const auto& [p, k] : factor(d).factors) {
        if (k != 1)
            throw DomainError(to_string(d) + " is not squarefree");
        out.push_back(p);
    }
    return out;
}

bool in_twisting_set(const IsogenyCurve& e, Int d)
{
    if (d <= 0)
        return false;
    const PrimeFactorization f = factor(d);
    if (f.factors.size() % 2 == 0)
        return false;
    for (const auto& [p, k] : f.factors)
        if (k != 1 || !in_twisting_primes(e, p))
            return false;
    return true;
}

TdPartition partition_Td(const IsogenyCurve& e, Int d, bool conjugate_root)
{
    if (e.b() <= 0 || e.disc_core() <= 0)
        throw DomainError("partition_Td needs b > 0 and a^2 - 4b > 0, got " + e.spec());
    if (!in_twisting_set(e, d))
        throw DomainError(to_string(d) + " is not in the twisting set of " + e.spec());
    TdPartition part;
    part.d = d;
    for (Prime q : prime_divisors(d)) {
        // Roots of x^2 - 2a x + (a^2 - 4b) are a +- s with s^2 = 4b.
        const auto s = sqrt_hensel(checked_mul(4, e.b()), q, 1);
        if (!s)
            throw InternalError("4b is a nonresidue modulo the twisting prime " + std::to_string(q));
        const std::uint64_t a = detail::reduce(e.a(), q);
        const std::uint64_t beta = conjugate_root ? (a + q - *s) % q : (a + *s) % q;
        BetaRecord rec{q, beta, legendre(static_cast<Int>(beta), q), legendre(d / static_cast<Int>(q), q)};
        (rec.cofactor_symbol != rec.beta_symbol ? part.plus : part.minus).push_back(q);
        part.beta_digest.push_back(rec);
    }
    return part;
}

TwistMatrices build_matrices(const TdPartition& part)
{
    TwistMatrices m;
    m.order = part.plus;
    m.order.insert(m.order.end(), part.minus.begin(), part.minus.end());
    m.plus_count = part.plus.size();
    const std::size_t r = m.order.size();
    m.A = F2Matrix(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            if (i != j)
                m.A.set(i, j, legendre(static_cast<Int>(m.order[j]), m.order[i]) == -1);
            else if (i >= m.plus_count)
                m.A.set(i, j, true);
        }
    m.A_bar = m.A.complement();
    m.A_tilde = F2Matrix::ones(r, 1).hstack(m.A);
    m.A_hat = F2Matrix::ones(1, r).vstack(m.A_bar);
    return m;
}

int eta_phi(const IsogenyCurve& /*e*/, Int d, const SelmerSubspace& relaxed)
{
    if (relaxed.contains(SquareClass::minus_one()))
        return 1;
    Functional f = Functional::sign();
    f.lambda = prime_divisors(d);
    for (const SquareClass& b : relaxed.basis())
        if (f(b) != 0)
            return 1;
    return 0;
}

std::pair<int, int> cassels_thetas(SignCase c)
{
    switch (c) {
    case SignCase::I: return {1, 0};
    case SignCase::II: return {-1, 0};
    case SignCase::III: return {0, 1};
    case SignCase::IV: return {0, -1};
    }
    return {0, 0};
}

DeltaReport delta_formulae(const IsogenyCurve& e, Int d)
{
    if (!in_twisting_set(e, d))
        throw DomainError(to_string(d) + " is not in the twisting set of " + e.spec());
    const SignCase c = sign_case(e);
    if (c == SignCase::I || c == SignCase::II)
        return delta_formulae(e, d, SelmerSubspace{});
    return delta_formulae(e, d, compute_selmer(relaxed_structure(e, d)));
}

DeltaReport delta_formulae(const IsogenyCurve& e, Int d, const SelmerSubspace& relaxed)
{
    if (!in_twisting_set(e, d))
        throw DomainError(to_string(d) + " is not in the twisting set of " + e.spec());
    DeltaReport r;
    r.d = d;
    r.omega = static_cast<unsigned>(prime_divisors(d).size());
    r.sign = sign_case(e);
    std::tie(r.theta_q, r.theta_inf) = cassels_thetas(r.sign);
    const int w = static_cast<int>(r.omega);
    switch (r.sign) {
    case SignCase::I:
        r.delta_phi = 0;
        r.delta_phi_hat = w;
        break;
    case SignCase::II:
        r.delta_phi = w;
        r.delta_phi_hat = 0;
        break;
    case SignCase::III:
    case SignCase::IV: {
        r.partition = partition_Td(e, d);
        r.matrices = build_matrices(*r.partition);
        r.eta = eta_phi(e, d, relaxed);
        const TwistMatrices& m = *r.matrices;
        const bool iii = r.sign == SignCase::III;
        const F2Matrix& used = iii ? (*r.eta ? m.A : m.A_hat) : (*r.eta ? m.A_tilde : m.A_bar);
        r.rank_matrix = iii ? (*r.eta ? "A" : "A_hat") : (*r.eta ? "A_tilde" : "A_bar");
        r.rank = f2_rank(used);
        const int k = static_cast<int>(r.rank);
        if (iii && *r.eta) {
            r.delta_phi = w - 1 - k;
            r.delta_phi_hat = w - k;
        } else if (iii) {
            r.delta_phi = w - k;
            r.delta_phi_hat = w + 1 - k;
        } else if (*r.eta) {
            r.delta_phi = w + 1 - k;
            r.delta_phi_hat = w - k;
        } else {
            r.delta_phi = w - k;
            r.delta_phi_hat = w - 1 - k;
        }
        break;
    }
    }
    if (r.delta_phi_hat != r.delta_phi + w * r.theta_q + r.theta_inf)
        throw InternalError("rank variation table violates the Cassels transfer for d = " + to_string(d));
    return r;
}

} // namespace isoselmer
