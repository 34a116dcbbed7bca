#pragma once

// Verification suites and the end-to-end twist analysis behind the CLI.

#include "isoselmer/arith.hpp"
#include "isoselmer/curve.hpp"
#include "isoselmer/selmer.hpp"
#include "isoselmer/twist.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace isoselmer {

struct RunConfig {
    std::vector<std::string> curves; // "a,b"
    std::uint64_t q_bound = 200;
    unsigned r_max = 3;
    Int d_bound = 1'000'000;
    std::vector<std::string> suites; // empty means all
    std::string out;                 // empty means stdout
    std::string format = "json";
    unsigned jobs = 0;               // 0 means hardware concurrency

    /// Throws DomainError on non-positive bounds, even r_max, unknown suite or format.
    void validate() const;
    unsigned effective_jobs() const;
};

/// The built-in curves, one or more per sign case.
const std::vector<IsogenyCurve>& battery();

const std::vector<std::string>& suite_names();

/// Battery followed by any user curve not already in it.
std::vector<IsogenyCurve> verification_curves(const RunConfig& cfg);

struct VerificationRecord {
    std::string suite;
    std::string key;
    std::string expected;
    std::string observed;
    bool pass = false;
    double seconds = 0;
};

std::string to_string(const VerificationRecord& r);

struct SuiteSummary {
    std::string suite;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct VerifyResult {
    std::vector<VerificationRecord> records; // deterministic order
    std::vector<SuiteSummary> summaries;     // in suite_names() order

    bool ok() const;
    const VerificationRecord* first_failure() const;
};

VerifyResult run_verify(const RunConfig& cfg);

/// Runs fn(0) ... fn(n-1) on up to `jobs` threads. The first exception thrown
/// by any task is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

struct TwistResult {
    DeltaReport delta;
    SelmerSubspace twist;       // Sel^phi(E^{-d})
    SelmerSubspace twist_prime; // Sel^phi(E'^{-d})
    int observed_delta_phi = 0;
    int observed_delta_phi_hat = 0;
};

struct CurveAnalysis {
    IsogenyCurve curve;
    std::uint64_t q_bound = 0;
    unsigned r_max = 0;
    Int d_bound = 0;
    std::vector<Prime> q_list;
    SelmerSubspace selmer;       // Sel^phi(E)
    SelmerSubspace selmer_prime; // Sel^phi(E')
    std::vector<TwistResult> results; // ascending d
};

CurveAnalysis analyze_curve(const IsogenyCurve& e, const RunConfig& cfg);

} // namespace isoselmer
