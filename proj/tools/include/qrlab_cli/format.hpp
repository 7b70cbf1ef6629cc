#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qrlab/check_report.hpp"
#include "qrlab/distortion.hpp"
#include "qrlab/domain.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/quadrature.hpp"
#include "qrlab/regularity.hpp"

namespace qrlab::cli {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form; "null" for non-finite values. The CSV
// writer and the JSON report share this formatting.
std::string format_number(double v);
Json number(double v);

Json to_json(const QuadratureResult& q);
Json to_json(const DomainRegion& region);
Json to_json(const CheckReport& report);
Json to_json(const DistortionFrontier& frontier);
Json to_json(const HolderPrediction& prediction);
Json to_json(const GrowthBound& bound);
Json to_json(const HolderEstimate& estimate);
Json to_json(const EquicontinuityReport& report);
Json to_json(const DifferentiabilityReport& report);

// Profile block; v/v_err are included when `monotone` is non-null.
Json profile_json(const RadialProfile& profile, const MonotoneProfile* monotone);
// Columns r,w,w_err,s,s_err,jint,jint_err[,v,v_err].
std::string profile_csv(const RadialProfile& profile, const MonotoneProfile* monotone);

// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qrlab::cli
