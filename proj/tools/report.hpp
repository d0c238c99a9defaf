#pragma once

// Machine-readable command report. Schema "consensus.report/v1":
//
//   {
//     "schema":     "consensus.report/v1",
//     "command":    "analyze" | "plan" | "critical size" | ... ,
//     "inputs":     { flag name -> value },
//     "result":     { command-specific payload },
//     "provenance": { "tool": "consensus", "version": "x.y.z", "seed": <uint, simulate only> }
//   }
//
// Floating-point fields are written with round-trip precision.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace consensus::cli {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchema = "consensus.report/v1";
inline constexpr std::string_view kToolName = "consensus";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct Report {
    std::string command;
    Json inputs = Json::object();
    Json result = Json::object();
    std::string tool_version = std::string(kToolVersion);
    std::optional<std::uint64_t> seed;

    friend bool operator==(const Report&, const Report&) = default;
};

Json to_json(const Report& report);

/// Throws std::invalid_argument when the document does not follow the schema.
Report report_from_json(const Json& doc);

enum class OutputFormat { Human, Json, Csv };

std::string render(const Report& report, OutputFormat format);

}  // namespace consensus::cli
