#include "isoselmer/errors.hpp"
#include "isoselmer/harness.hpp"
#include "isoselmer/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

using namespace isoselmer;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kResource = 3, kInternal = 4 };

void add_bounds(CLI::App* cmd, RunConfig& cfg, std::string& d_bound)
{
    cmd->add_option("--q-bound", cfg.q_bound, "largest twisting prime")->capture_default_str();
    cmd->add_option("--r-max", cfg.r_max, "largest odd number of primes in d")->capture_default_str();
    cmd->add_option("--d-bound", d_bound, "largest d")->capture_default_str();
    cmd->add_option("--out", cfg.out, "output file (default: stdout)");
    cmd->add_option("--format", cfg.format, "json or csv")->capture_default_str();
    cmd->add_option("--jobs", cfg.jobs, "worker threads (0: one per core)")->capture_default_str();
}

void emit(const RunConfig& cfg, const std::string& content)
{
    if (cfg.out.empty())
        std::cout << content;
    else
        write_file_atomic(cfg.out, content);
}

int cmd_analyze(const RunConfig& cfg)
{
    const IsogenyCurve e = parse_curve(cfg.curves.front());
    const CurveAnalysis a = analyze_curve(e, cfg);
    emit(cfg, cfg.format == "csv" ? analysis_csv({a}) : analysis_json(a));
    return kOk;
}

int cmd_report(const RunConfig& cfg)
{
    std::vector<CurveAnalysis> all;
    for (const IsogenyCurve& e : verification_curves(cfg))
        all.push_back(analyze_curve(e, cfg));
    emit(cfg, cfg.format == "csv" ? analysis_csv(all) : battery_json(all));
    return kOk;
}

int cmd_verify(const RunConfig& cfg)
{
    const VerifyResult r = isoselmer::run_verify(cfg);
    std::size_t total = 0;
    for (const SuiteSummary& s : r.summaries) {
        std::cout << s.suite << ": " << s.passed << " passed, " << s.failed << " failed\n";
        total += s.passed + s.failed;
    }
    if (!cfg.out.empty())
        write_file_atomic(cfg.out, cfg.format == "csv" ? verify_csv(r) : verify_json(r));
    if (const VerificationRecord* f = r.first_failure()) {
        std::cerr << "first failure:\n" << to_string(*f) << "\n";
        return kVerifyFailed;
    }
    std::cout << "all " << total << " checks passed\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact 2-isogeny Selmer groups and their change under quadratic twists"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string d_bound = "1000000";

    auto* analyze = app.add_subcommand("analyze", "rank variation report for one curve y^2 = x(x^2 + a x + b)");
    analyze->add_option("--curve", cfg.curves, "curve as a,b")->required()->expected(1)->allow_extra_args(false);
    add_bounds(analyze, cfg, d_bound);

    auto* verify = app.add_subcommand("verify", "check every formula against direct descent");
    verify->add_option("--curve", cfg.curves, "extra curves a,b (repeatable)");
    verify->add_option("--suites", cfg.suites, "subset of local,master,master2,parity,cassels,intersections")
        ->delimiter(',');
    add_bounds(verify, cfg, d_bound);

    auto* report = app.add_subcommand("report", "analysis of the built-in curve battery plus any --curve");
    report->add_option("--curve", cfg.curves, "extra curves a,b (repeatable)");
    add_bounds(report, cfg, d_bound);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const auto bound = parse_int(d_bound);
        if (!bound)
            throw DomainError("--d-bound must be an integer");
        cfg.d_bound = *bound;
        cfg.validate();
        if (analyze->parsed())
            return cmd_analyze(cfg);
        if (report->parsed())
            return cmd_report(cfg);
        return cmd_verify(cfg);
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
