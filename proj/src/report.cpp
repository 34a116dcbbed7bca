#include "isoselmer/report.hpp"

#include "isoselmer/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

namespace isoselmer {

namespace {

using Json = nlohmann::ordered_json;

Json int_json(Int n)
{
    if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(n);
    return to_string(n);
}

Json class_json(const SquareClass& c)
{
    try {
        return int_json(c.value());
    } catch (const ResourceError&) {
        return to_string(c);
    }
}

Json subspace_json(const SelmerSubspace& v)
{
    Json basis = Json::array();
    for (const SquareClass& c : v.basis())
        basis.push_back(class_json(c));
    return Json{{"dim", v.dim()}, {"basis", basis}};
}

Json curve_json(const IsogenyCurve& e)
{
    return Json{{"a", int_json(e.a())}, {"b", int_json(e.b())}, {"case", to_string(sign_case(e))}};
}

Json result_json(const TwistResult& r, const CurveAnalysis& a)
{
    const DeltaReport& d = r.delta;
    Json j;
    j["d"] = int_json(d.d);
    j["omega"] = d.omega;
    if (d.partition)
        j["partition"] = Json{{"plus", d.partition->plus}, {"minus", d.partition->minus}};
    else
        j["partition"] = nullptr;
    j["eta"] = d.eta ? Json(*d.eta) : Json(nullptr);
    if (d.matrices) {
        const TwistMatrices& m = *d.matrices;
        j["matrices"] = Json{{"order", m.order},
                             {"A", m.A.to_strings()},
                             {"A_tilde", m.A_tilde.to_strings()},
                             {"A_hat", m.A_hat.to_strings()},
                             {"A_bar", m.A_bar.to_strings()}};
        j["ranks"] = Json{{"A", f2_rank(m.A)},
                          {"A_tilde", f2_rank(m.A_tilde)},
                          {"A_hat", f2_rank(m.A_hat)},
                          {"A_bar", f2_rank(m.A_bar)},
                          {"used", d.rank_matrix}};
    } else {
        j["matrices"] = nullptr;
        j["ranks"] = nullptr;
    }
    j["delta_phi"] = d.delta_phi;
    j["delta_phi_hat"] = d.delta_phi_hat;
    j["theta_q"] = d.theta_q;
    j["theta_inf"] = d.theta_inf;
    j["observed"] = Json{{"delta_phi", r.observed_delta_phi}, {"delta_phi_hat", r.observed_delta_phi_hat}};
    Json basis = Json::array();
    for (const SquareClass& c : r.twist.basis())
        basis.push_back(class_json(c));
    Json basis_prime = Json::array();
    for (const SquareClass& c : r.twist_prime.basis())
        basis_prime.push_back(class_json(c));
    j["selmer"] = Json{{"dim_E", a.selmer.dim()},
                       {"dim_twist", r.twist.dim()},
                       {"basis", basis},
                       {"dim_E_prime", a.selmer_prime.dim()},
                       {"dim_twist_prime", r.twist_prime.dim()},
                       {"basis_prime", basis_prime}};
    return j;
}

Json analysis_body(const CurveAnalysis& a)
{
    Json j;
    j["curve"] = curve_json(a.curve);
    j["config"] = Json{{"q_bound", a.q_bound}, {"r_max", a.r_max}, {"d_bound", int_json(a.d_bound)}};
    j["q_list"] = a.q_list;
    j["selmer"] = Json{{"E", subspace_json(a.selmer)}, {"E_prime", subspace_json(a.selmer_prime)}};
    Json results = Json::array();
    for (const TwistResult& r : a.results)
        results.push_back(result_json(r, a));
    j["results"] = results;
    return j;
}

std::string join(const std::vector<Prime>& ps)
{
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i)
        s += (i ? ";" : "") + std::to_string(ps[i]);
    return s;
}

std::string join(const SelmerSubspace& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.basis().size(); ++i)
        s += (i ? ";" : "") + class_json(v.basis()[i]).dump();
    return s;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

} // namespace

std::string analysis_json(const CurveAnalysis& a)
{
    Json j;
    j["schema"] = kReportSchema;
    const Json body = analysis_body(a);
    for (const auto& [k, v] : body.items())
        j[k] = v;
    return j.dump(2) + "\n";
}

std::string battery_json(const std::vector<CurveAnalysis>& analyses)
{
    Json j;
    j["schema"] = kReportSchema;
    Json curves = Json::array();
    for (const CurveAnalysis& a : analyses)
        curves.push_back(analysis_body(a));
    j["curves"] = curves;
    return j.dump(2) + "\n";
}

std::string analysis_csv(const std::vector<CurveAnalysis>& analyses)
{
    std::ostringstream out;
    out << "a,b,case,d,omega,plus,minus,eta,rank_matrix,rank,delta_phi,delta_phi_hat,theta_q,theta_inf,"
           "observed_delta_phi,observed_delta_phi_hat,dim_E,dim_twist,dim_E_prime,dim_twist_prime,basis_twist,"
           "basis_twist_prime\n";
    for (const CurveAnalysis& a : analyses)
        for (const TwistResult& r : a.results) {
            const DeltaReport& d = r.delta;
            out << to_string(a.curve.a()) << ',' << to_string(a.curve.b()) << ',' << to_string(d.sign) << ','
                << to_string(d.d) << ',' << d.omega << ',' << (d.partition ? join(d.partition->plus) : "") << ','
                << (d.partition ? join(d.partition->minus) : "") << ',' << (d.eta ? std::to_string(*d.eta) : "")
                << ',' << d.rank_matrix << ',' << (d.matrices ? std::to_string(d.rank) : "") << ',' << d.delta_phi
                << ',' << d.delta_phi_hat << ',' << d.theta_q << ',' << d.theta_inf << ',' << r.observed_delta_phi
                << ',' << r.observed_delta_phi_hat << ',' << a.selmer.dim() << ',' << r.twist.dim() << ','
                << a.selmer_prime.dim() << ',' << r.twist_prime.dim() << ',' << join(r.twist) << ','
                << join(r.twist_prime) << '\n';
        }
    return out.str();
}

std::string verify_json(const VerifyResult& r)
{
    Json j;
    j["schema"] = kReportSchema;
    Json summaries = Json::array();
    for (const SuiteSummary& s : r.summaries)
        summaries.push_back(Json{{"suite", s.suite}, {"passed", s.passed}, {"failed", s.failed}});
    j["summary"] = summaries;
    j["ok"] = r.ok();
    Json records = Json::array();
    for (const VerificationRecord& rec : r.records)
        records.push_back(Json{{"suite", rec.suite},
                               {"key", rec.key},
                               {"expected", rec.expected},
                               {"observed", rec.observed},
                               {"pass", rec.pass}});
    j["records"] = records;
    return j.dump(2) + "\n";
}

std::string verify_csv(const VerifyResult& r)
{
    std::ostringstream out;
    out << "suite,key,expected,observed,pass\n";
    for (const VerificationRecord& rec : r.records)
        out << csv_field(rec.suite) << ',' << csv_field(rec.key) << ',' << csv_field(rec.expected) << ','
            << csv_field(rec.observed) << ',' << (rec.pass ? "true" : "false") << '\n';
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw ResourceError("cannot write " + path);
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ResourceError("cannot write " + path);
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ResourceError("cannot write " + path + ": " + ec.message());
    }
}

} // namespace isoselmer
