#pragma once

// Machine-readable reports shared by the command-line tool and the
// acceptance suite.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "kcbs/adversary.hpp"
#include "kcbs/context_graph.hpp"
#include "kcbs/protocol.hpp"

namespace kcbs {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

/// Rounds every floating-point value to 15 significant digits, so that a
/// dump/parse/dump cycle reproduces the document byte for byte.
nlohmann::json round_reals(nlohmann::json j);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct SimulationResult
{
    Transcript transcript;
    KeyStats key_stats;
    SecurityReport security;
    std::optional<AttackExpectation> oracle;
    /// Rounded SimulationReport document.
    nlohmann::json report;
};

/// Runs a session, the security test (sample chosen from stream
/// kSacrificeStream of cfg.seed), the oracle when Eve is present, and
/// assembles the report. Output is independent of `threads`.
SimulationResult run_simulation(const ProtocolConfig& cfg, unsigned threads);

nlohmann::json simulation_report(const ProtocolConfig& cfg, const KeyStats& stats, const SecurityReport& security,
                                 const std::optional<AttackExpectation>& oracle,
                                 const MonogamyCertificate& certificate);

/// 0 Secure, 2 Insecure, 3 Inconclusive.
int exit_code_for(Verdict v);

/// One "path value" line per scalar in the report; every number shown is in the document.
std::string human_summary(const nlohmann::json& report);

struct VerifyResult
{
    bool ok;
    nlohmann::json report;
};

/// Pentagon orthogonality, overlaps, and the ktilde extremes of `basis`.
VerifyResult verify_basis(const KcbsBasis& basis);

}  // namespace kcbs
