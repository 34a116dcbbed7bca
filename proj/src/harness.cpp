#include "isoselmer/harness.hpp"

#include "isoselmer/errors.hpp"
#include "isoselmer/local.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace isoselmer {

void RunConfig::validate() const
{
    if (q_bound == 0)
        throw DomainError("--q-bound must be positive");
    if (r_max == 0 || r_max % 2 == 0)
        throw DomainError("--r-max must be a positive odd integer");
    if (d_bound <= 0)
        throw DomainError("--d-bound must be positive");
    for (const std::string& s : suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw DomainError("unknown suite \"" + s + "\"");
    if (format != "json" && format != "csv")
        throw DomainError("--format must be json or csv");
}

unsigned RunConfig::effective_jobs() const
{
    if (jobs > 0)
        return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

const std::vector<IsogenyCurve>& battery()
{
    static const std::vector<IsogenyCurve> curves = [] {
        std::vector<IsogenyCurve> out;
        for (auto [a, b] : std::vector<std::pair<int, int>>{{0, -2}, {0, 2}, {-3, 1}, {3, 1}, {0, 5}, {0, -5}, {-1, 3}, {1, 3}})
            out.push_back(new_curve(a, b));
        return out;
    }();
    return curves;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"local", "master", "master2", "parity", "cassels", "intersections"};
    return names;
}

std::vector<IsogenyCurve> verification_curves(const RunConfig& cfg)
{
    std::vector<IsogenyCurve> out = battery();
    for (const std::string& spec : cfg.curves) {
        IsogenyCurve e = parse_curve(spec);
        if (std::find(out.begin(), out.end(), e) == out.end())
            out.push_back(std::move(e));
    }
    return out;
}

std::string to_string(const VerificationRecord& r)
{
    return "[" + r.suite + "] " + r.key + "\n  expected: " + r.expected + "\n  observed: " + r.observed +
           "\n  result:   " + (r.pass ? "pass" : "FAIL");
}

bool VerifyResult::ok() const { return first_failure() == nullptr; }

const VerificationRecord* VerifyResult::first_failure() const
{
    for (const VerificationRecord& r : records)
        if (!r.pass)
            return &r;
    return nullptr;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(work);
    for (std::thread& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

namespace {

using Clock = std::chrono::steady_clock;

std::string key_of(const IsogenyCurve& e) { return "E=(" + e.spec() + ")"; }

std::string primes_string(const std::vector<Prime>& ps)
{
    std::string s = "[";
    for (std::size_t i = 0; i < ps.size(); ++i)
        s += (i ? "," : "") + std::to_string(ps[i]);
    return s + "]";
}

class Recorder {
public:
    explicit Recorder(std::vector<VerificationRecord>& out) : out_(out) {}

    template <class F>
    void check(const std::string& suite, const std::string& key, const std::string& expected, F&& observe)
    {
        const auto t0 = Clock::now();
        std::string observed = observe();
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        const bool pass = observed == expected;
        out_.push_back({suite, key, expected, std::move(observed), pass, dt});
    }

private:
    std::vector<VerificationRecord>& out_;
};

std::vector<Place> small_places(std::uint64_t limit)
{
    std::vector<Place> v{Place::infinity()};
    for (Prime p : primes_up_to(limit))
        v.push_back(Place::prime(p));
    return v;
}

struct CurveData {
    IsogenyCurve e;
    IsogenyCurve ep;
    SelmerSubspace sel;
    SelmerSubspace sel_prime;
    std::vector<Prime> q_list;
    std::vector<Int> d_list;
};

void hilbert_task(Recorder& rec)
{
    std::vector<Int> reps;
    for (Int n = -50; n <= 50; ++n)
        if (n != 0 && square_class(n).value() == n)
            reps.push_back(n);
    for (Int x : reps)
        for (Int y : reps) {
            const SquareClass a = square_class(x), b = square_class(y);
            rec.check("local", "hilbert reciprocity (" + to_string(x) + "," + to_string(y) + ")", "1", [&] {
                std::vector<Prime> ps{2};
                for (Prime p : a.primes)
                    ps.push_back(p);
                for (Prime p : b.primes)
                    ps.push_back(p);
                std::sort(ps.begin(), ps.end());
                ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
                int prod = hilbert(a, b, Place::infinity());
                for (Prime p : ps)
                    prod *= hilbert(a, b, Place::prime(p));
                return std::to_string(prod);
            });
        }
}

void curve_task(const CurveData& c, const std::vector<std::string>& suites, Recorder& rec)
{
    auto on = [&](const char* s) { return std::find(suites.begin(), suites.end(), s) != suites.end(); };
    const std::string key = key_of(c.e);
    if (on("local")) {
        for (Place v : small_places(60)) {
            const LocalSubgroup oracle = kummer_image_oracle(c.e, v);
            rec.check("local", key + " v=" + to_string(v) + " oracle image is a subgroup", "true",
                      [&] { return oracle.is_subgroup() ? "true" : "false"; });
            if (const auto fast = kummer_image_fast(c.e, v))
                rec.check("local", key + " v=" + to_string(v) + " fast image", to_string(oracle),
                          [&] { return to_string(*fast); });
        }
    }
    if (on("master")) {
        for (Prime q : enumerate_Q(c.e, 1000)) {
            rec.check("master", key + " q=" + std::to_string(q) + " (b/q) = sign(b)", c.e.b() > 0 ? "1" : "-1",
                      [&] { return std::to_string(legendre(c.e.b(), q)); });
            rec.check("master", key + " q=" + std::to_string(q) + " (a^2-4b / q) = sign(a^2-4b)",
                      c.e.disc_core() > 0 ? "1" : "-1", [&] { return std::to_string(legendre(c.e.disc_core(), q)); });
        }
    }
    if (on("cassels")) {
        rec.check("cassels", key + " dim Sel(E) - dim Sel(E')", [&] {
            int sum = 0;
            std::vector<Place> places{Place::infinity()};
            for (Prime p : c.e.bad_support())
                places.push_back(Place::prime(p));
            for (Place v : places)
                sum += static_cast<int>(kummer_image_oracle(c.e, v).dim()) - 1;
            return std::to_string(sum);
        }(), [&] { return std::to_string(static_cast<int>(c.sel.dim()) - static_cast<int>(c.sel_prime.dim())); });
    }
}

// Two odd primes outside the given set, for supporting-set padding.
std::vector<Prime> padding_primes(const std::vector<Prime>& avoid)
{
    std::vector<Prime> out;
    for (Prime p = 3; out.size() < 2; p += 2)
        if (is_prime(p) && !std::binary_search(avoid.begin(), avoid.end(), p))
            out.push_back(p);
    return out;
}

void instance_task(const CurveData& c, Int d, const std::vector<std::string>& suites, Recorder& rec)
{
    auto on = [&](const char* s) { return std::find(suites.begin(), suites.end(), s) != suites.end(); };
    const IsogenyCurve& e = c.e;
    const std::string key = key_of(e) + " d=" + to_string(d);
    const std::vector<Prime> primes = prime_divisors(d);
    const IsogenyCurve et = quadratic_twist(e, -d);
    const SignCase sc = sign_case(e);

    std::optional<SelmerSubspace> twist_sel;
    auto sel_twist = [&]() -> const SelmerSubspace& {
        if (!twist_sel)
            twist_sel = selmer_group(et);
        return *twist_sel;
    };
    std::optional<MasterSelmer> master;
    auto via_master = [&]() -> const MasterSelmer& {
        if (!master)
            master = selmer_via_master(e, d);
        return *master;
    };
    std::optional<DeltaReport> delta;
    auto predicted = [&]() -> const DeltaReport& {
        if (!delta)
            delta = delta_formulae(e, d, via_master().relaxed);
        return *delta;
    };
    std::optional<std::pair<int, int>> obs;
    auto observed = [&]() -> std::pair<int, int> {
        if (!obs) {
            const SelmerSubspace tp = selmer_group(quadratic_twist(c.ep, -d));
            obs = {static_cast<int>(sel_twist().dim()) - static_cast<int>(c.sel.dim()),
                   static_cast<int>(tp.dim()) - static_cast<int>(c.sel_prime.dim())};
        }
        return *obs;
    };

    if (on("local")) {
        const TwistContext ctx{e, d};
        std::vector<Place> places = small_places(60);
        for (Prime q : primes)
            if (q > 60)
                places.push_back(Place::prime(q));
        for (Place v : places) {
            const LocalSubgroup oracle = kummer_image_oracle(et, v);
            if (const auto fast = kummer_image_fast(et, v, ctx))
                rec.check("local", key + " twist v=" + to_string(v) + " fast image", to_string(oracle),
                          [&] { return to_string(*fast); });
            const bool divides_d = !v.is_infinite() && std::binary_search(primes.begin(), primes.end(), v.p);
            if (!v.is_infinite() && !divides_d)
                rec.check("local", key + " v=" + to_string(v) + " image unchanged by twisting",
                          to_string(kummer_image_oracle(e, v)), [&] { return to_string(oracle); });
        }
    }
    if (on("master")) {
        rec.check("master", key + " Sel(E) from relaxed group", to_string(c.sel),
                  [&] { return to_string(via_master().curve); });
        rec.check("master", key + " Sel(E^-d) from relaxed group", to_string(sel_twist()),
                  [&] { return to_string(via_master().twist); });
        rec.check("master", key + " relaxed group equal on E and E^-d", to_string(via_master().relaxed),
                  [&] { return to_string(compute_selmer(relaxed_structure(et, d))); });
        for (Prime q : primes)
            rec.check("master", key + " -" + std::to_string(q) + " in relaxed group", "true",
                      [&] { return via_master().relaxed.contains(SquareClass::of_prime(q, true)) ? "true" : "false"; });
        std::vector<Functional> plus_lambdas{Functional::sign()};
        for (Prime q : primes)
            plus_lambdas.push_back(Functional::lambda_at(q));
        const SelmerSubspace w = intersect_with_functionals(via_master().relaxed, plus_lambdas);
        for (Prime qt : c.q_list)
            rec.check("master", key + " gamma_" + std::to_string(qt) + " vanishes on V+ cut by lambdas", "0", [&] {
                int hits = 0;
                for (const SquareClass& m : w.members())
                    hits += eval_gamma(m, qt);
                return std::to_string(hits);
            });
        const SelmerSubspace& v = via_master().relaxed;
        std::vector<Functional> gammas, lambdas;
        for (Prime q : primes) {
            gammas.push_back(Functional::gamma_at(q));
            lambdas.push_back(Functional::lambda_at(q));
        }
        rec.check("master", key + " gamma kernel via matrix", to_string(intersect_with_functionals(v, gammas)),
                  [&] { return to_string(matrix_kernel(v, restricted_matrix(v, FunctionalKind::gamma, primes))); });
        rec.check("master", key + " lambda kernel via matrix", to_string(intersect_with_functionals(v, lambdas)),
                  [&] { return to_string(matrix_kernel(v, restricted_matrix(v, FunctionalKind::lambda, primes))); });
        rec.check("master", key + " rank-nullity for lambda rows", std::to_string(v.dim()), [&] {
            return std::to_string(f2_rank(restricted_matrix(v, FunctionalKind::lambda, primes)) +
                                  intersect_with_functionals(v, lambdas).dim());
        });
        SelmerStructure padded = relaxed_structure(e, d);
        std::vector<Prime> avoid = e.bad_support();
        avoid.insert(avoid.end(), primes.begin(), primes.end());
        std::sort(avoid.begin(), avoid.end());
        padded.padding = padding_primes(avoid);
        const SelmerSubspace vp = compute_selmer(padded);
        rec.check("master", key + " relaxed group with padded support", to_string(v), [&] { return to_string(vp); });
        if (sc == SignCase::III || sc == SignCase::IV)
            rec.check("master", key + " eta with padded support", std::to_string(eta_phi(e, d, v)),
                      [&] { return std::to_string(eta_phi(e, d, vp)); });
    }
    if (on("master2")) {
        const DeltaReport& r = predicted();
        rec.check("master2", key + " delta_phi", std::to_string(r.delta_phi),
                  [&] { return std::to_string(observed().first); });
        rec.check("master2", key + " delta_phi_hat", std::to_string(r.delta_phi_hat),
                  [&] { return std::to_string(observed().second); });
        if (r.partition) {
            const TdPartition other = partition_Td(e, d, true);
            rec.check("master2", key + " T_d partition independent of root",
                      primes_string(r.partition->plus) + "|" + primes_string(r.partition->minus),
                      [&] { return primes_string(other.plus) + "|" + primes_string(other.minus); });
            const TwistMatrices& m = *r.matrices;
            const std::size_t np = m.plus_count, nm = m.order.size() - m.plus_count;
            if (np > 0 && nm > 0) {
                rec.check("master2", key + " A_-+ is the complement of A_+- transposed",
                          [&] {
                              auto s = m.A.block(0, np, np, nm).transpose().complement().to_strings();
                              std::string j;
                              for (auto& x : s)
                                  j += x + "/";
                              return j;
                          }(),
                          [&] {
                              auto s = m.A.block(np, 0, nm, np).to_strings();
                              std::string j;
                              for (auto& x : s)
                                  j += x + "/";
                              return j;
                          });
            }
            rec.check("master2", key + " rank(A~) - rank(A) in {0,1}", "true", [&] {
                const auto k = f2_rank(m.A_tilde), k0 = f2_rank(m.A);
                return k == k0 || k == k0 + 1 ? "true" : "false";
            });
            rec.check("master2", key + " rank(A^) - rank(A-bar) in {0,1}", "true", [&] {
                const auto k = f2_rank(m.A_hat), k0 = f2_rank(m.A_bar);
                return k == k0 || k == k0 + 1 ? "true" : "false";
            });
        }
    }
    if (on("parity")) {
        rec.check("parity", key + " predicted delta_phi + delta_phi_hat odd", "1",
                  [&] { return std::to_string(((predicted().delta_phi + predicted().delta_phi_hat) % 2 + 2) % 2); });
        rec.check("parity", key + " observed delta_phi + delta_phi_hat odd", "1",
                  [&] { return std::to_string(((observed().first + observed().second) % 2 + 2) % 2); });
    }
    if (on("cassels")) {
        const auto [tq, ti] = cassels_thetas(sc);
        const int w = static_cast<int>(primes.size());
        rec.check("cassels", key + " delta_phi_hat - delta_phi = omega theta_q + theta_inf", std::to_string(w * tq + ti),
                  [&] { return std::to_string(observed().second - observed().first); });
    }
    if (on("intersections")) {
        rec.check("intersections", key + " Sel(E) meet Sel(E^-d)", to_string(via_master().common),
                  [&] { return to_string(intersect(c.sel, sel_twist())); });
    }
}

} // namespace

VerifyResult run_verify(const RunConfig& cfg)
{
    cfg.validate();
    const std::vector<std::string> suites = cfg.suites.empty() ? suite_names() : cfg.suites;
    const unsigned jobs = cfg.effective_jobs();

    const std::vector<IsogenyCurve> curves = verification_curves(cfg);
    std::vector<CurveData> data(curves.size());
    parallel_for(curves.size(), jobs, [&](std::size_t i) {
        CurveData& c = data[i];
        c.e = curves[i];
        c.ep = isogenous_curve(c.e);
        c.sel = selmer_group(c.e);
        c.sel_prime = selmer_group(c.ep);
        c.q_list = enumerate_Q(c.e, cfg.q_bound);
        c.d_list = generate_D(c.q_list, cfg.r_max, cfg.d_bound);
    });

    struct Task {
        int kind; // 0 hilbert, 1 curve, 2 instance
        std::size_t curve = 0;
        Int d = 0;
    };
    std::vector<Task> tasks;
    if (std::find(suites.begin(), suites.end(), "local") != suites.end())
        tasks.push_back({0});
    for (std::size_t i = 0; i < data.size(); ++i) {
        tasks.push_back({1, i});
        for (Int d : data[i].d_list)
            tasks.push_back({2, i, d});
    }
    std::vector<std::vector<VerificationRecord>> out(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t t) {
        Recorder rec(out[t]);
        const Task& task = tasks[t];
        if (task.kind == 0)
            hilbert_task(rec);
        else if (task.kind == 1)
            curve_task(data[task.curve], suites, rec);
        else
            instance_task(data[task.curve], task.d, suites, rec);
    });

    VerifyResult result;
    for (auto& part : out)
        for (auto& r : part)
            result.records.push_back(std::move(r));
    for (const std::string& s : suite_names()) {
        if (std::find(suites.begin(), suites.end(), s) == suites.end())
            continue;
        SuiteSummary sum{s, 0, 0};
        for (const VerificationRecord& r : result.records)
            if (r.suite == s)
                (r.pass ? sum.passed : sum.failed)++;
        result.summaries.push_back(sum);
    }
    return result;
}

CurveAnalysis analyze_curve(const IsogenyCurve& e, const RunConfig& cfg)
{
    cfg.validate();
    CurveAnalysis a;
    a.curve = e;
    a.q_bound = cfg.q_bound;
    a.r_max = cfg.r_max;
    a.d_bound = cfg.d_bound;
    a.q_list = enumerate_Q(e, cfg.q_bound);
    const IsogenyCurve ep = isogenous_curve(e);
    a.selmer = selmer_group(e);
    a.selmer_prime = selmer_group(ep);
    const std::vector<Int> ds = generate_D(a.q_list, cfg.r_max, cfg.d_bound);
    a.results.resize(ds.size());
    parallel_for(ds.size(), cfg.effective_jobs(), [&](std::size_t i) {
        const Int d = ds[i];
        TwistResult& r = a.results[i];
        r.delta = delta_formulae(e, d);
        r.twist = selmer_group(quadratic_twist(e, -d));
        r.twist_prime = selmer_group(quadratic_twist(ep, -d));
        r.observed_delta_phi = static_cast<int>(r.twist.dim()) - static_cast<int>(a.selmer.dim());
        r.observed_delta_phi_hat = static_cast<int>(r.twist_prime.dim()) - static_cast<int>(a.selmer_prime.dim());
    });
    return a;
}

} // namespace isoselmer
