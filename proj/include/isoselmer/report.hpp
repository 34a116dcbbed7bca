#pragma once

// Deterministic JSON / CSV serialization of analyses and verification runs.

#include "isoselmer/harness.hpp"

#include <string>
#include <vector>

namespace isoselmer {

inline constexpr int kReportSchema = 1;

/// One curve, as emitted by `analyze`.
std::string analysis_json(const CurveAnalysis& a);
/// Several curves, as emitted by `report`.
std::string battery_json(const std::vector<CurveAnalysis>& analyses);
/// One row per (curve, d).
std::string analysis_csv(const std::vector<CurveAnalysis>& analyses);

/// Records without timings, so reruns are byte-identical.
std::string verify_json(const VerifyResult& r);
std::string verify_csv(const VerifyResult& r);

/// Writes through a temporary sibling file and renames it into place.
/// Throws ResourceError when the path is not writable.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace isoselmer
