#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "cogrowth/growth.hpp"
#include "cogrowth/pipeline.hpp"
#include "cogrowth/projection_axioms.hpp"

namespace cogrowth {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Rounds to 12 significant digits; non-finite values become null.
Json number(double v);

std::uint64_t fnv1a(std::string_view bytes);
std::string digest(std::string_view bytes);

/// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::string& path, std::string_view content);
/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

/// radius,count,cumulative with exact integer counts.
std::string census_csv(const ShellCensus& census);

Json to_json(const ShellCensus& census);
Json to_json(const GrowthEstimate& e);
Json to_json(const GrowthReport& r);
Json to_json(const Group& group, const AxiomReport& r);
Json to_json(const CheckOutcome& c);
Json to_json(const PipelineConstants& k);
Json to_json(const EpsilonCertificate& c);
Json to_json(const PipelineRun& run);

}  // namespace cogrowth
