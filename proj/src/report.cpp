#include "kcbs/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace kcbs {

namespace {

double round15(double x)
{
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

void summarize(const nlohmann::json& j, const std::string& path, std::ostringstream& out)
{
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) summarize(value, path.empty() ? key : path + "." + key, out);
    } else if (j.is_array()) {
        // Tables and graphs stay in the JSON document only.
        return;
    } else if (!j.is_null() && !(j.is_string() && j.get_ref<const std::string&>().empty())) {
        out << path << ' ' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

}  // namespace

nlohmann::json round_reals(nlohmann::json j)
{
    if (j.is_number_float()) return round15(j.get<double>());
    if (j.is_structured()) {
        for (auto& child : j) child = round_reals(std::move(child));
    }
    return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json simulation_report(const ProtocolConfig& cfg, const KeyStats& stats, const SecurityReport& security,
                                 const std::optional<AttackExpectation>& oracle,
                                 const MonogamyCertificate& certificate)
{
    nlohmann::json report;
    report["schema_version"] = kReportSchemaVersion;
    report["tool_version"] = kToolVersion;
    report["config"] = to_json(cfg);
    report["key_stats"] = to_json(stats);
    report["security_report"] = to_json(security);
    report["oracle"] = oracle ? to_json(*oracle) : nlohmann::json();
    report["kcbs_constants"] = {{"published", to_json(bounds())}, {"derived", to_json(derived_bounds())}};
    report["monogamy_certificate"] = {{"mode", certificate.mode},
                                      {"bound", certificate.bound},
                                      {"alpha", certificate.alpha},
                                      {"chordal", certificate.chordal},
                                      {"deterministic_max", certificate.deterministic_max},
                                      {"clique_cover", certificate.clique_cover},
                                      {"valid", certificate.valid()}};
    nlohmann::json diagnostics = nlohmann::json::object();
    if (security.pe_estimate && !std::isnan(security.kab_estimate)) {
        // Eve's sifted-bit agreement plays the role of K(A,E) here; the sum is not bounded by 6/5.
        diagnostics["kab_plus_kae_estimate"] = security.kab_estimate + *security.pe_estimate;
        diagnostics["pb_greater_than_pe"] = security.kab_estimate > *security.pe_estimate;
    }
    if (oracle) diagnostics["oracle_pb_greater_than_pe"] = oracle->kab_expected > oracle->pe_expected;
    diagnostics["label"] = "diagnostic only";
    report["diagnostics"] = diagnostics;
    return round_reals(std::move(report));
}

SimulationResult run_simulation(const ProtocolConfig& cfg, unsigned threads)
{
    validate(cfg, true);
    SimulationResult result{run_session(cfg, threads), {}, {}, std::nullopt, {}};
    result.key_stats = key_stats(result.transcript);
    RngStream sample_rng(cfg.seed, kSacrificeStream);
    result.security = estimate_security(result.transcript, cfg.sacrifice_fraction, sample_rng);
    if (cfg.eve.present()) result.oracle = attack_expectation(cfg.eve, cfg.basis);
    result.report = simulation_report(cfg, result.key_stats, result.security, result.oracle,
                                      verify_monogamy_decomposition(JointGraphMode::PaperAbstract));
    return result;
}

int exit_code_for(Verdict v)
{
    switch (v) {
    case Verdict::Secure: return 0;
    case Verdict::Insecure: return 2;
    case Verdict::Inconclusive: return 3;
    }
    return 3;
}

std::string human_summary(const nlohmann::json& report)
{
    std::ostringstream out;
    summarize(report, "", out);
    return out.str();
}

VerifyResult verify_basis(const KcbsBasis& basis)
{
    nlohmann::json neighbor = nlohmann::json::array();
    nlohmann::json distance2 = nlohmann::json::array();
    double worst_neighbor = 0.0;
    for (int i = 0; i < kSettings; ++i) {
        const double n = std::abs(inner_product(basis.vector(i), basis.vector((i + 1) % kSettings)));
        const double d = std::abs(inner_product(basis.vector(i), basis.vector((i + 2) % kSettings)));
        worst_neighbor = std::max(worst_neighbor, n);
        neighbor.push_back(n);
        distance2.push_back(d);
    }
    const auto graph = orthogonality_graph(basis);
    const auto pentagon = pentagon_graph();
    bool is_pentagon = true;
    for (int i = 0; i < kSettings; ++i) {
        for (int j = 0; j < kSettings; ++j) {
            if (i != j && graph.adjacent(i, j, EdgeKind::Exclusive) != pentagon.adjacent(i, j, EdgeKind::Exclusive)) {
                is_pentagon = false;
            }
        }
    }
    const auto best = ktilde_max(basis);
    const double nc_bound = double(noncontextual_max(graph)) / kSettings;
    const auto published = bounds();
    const bool violates = best.value > nc_bound;
    const bool within_exclusivity = best.value <= published.exclusivity_max.value() + 1e-12;
    const bool ok = is_pentagon && worst_neighbor <= 1e-10 && violates && within_exclusivity;

    nlohmann::json state = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) state.push_back({best.state[c].real(), best.state[c].imag()});
    nlohmann::json report = {{"ok", ok},
                             {"pentagon", is_pentagon},
                             {"max_neighbor_overlap", worst_neighbor},
                             {"neighbor_overlaps", neighbor},
                             {"distance2_overlaps", distance2},
                             {"noncontextual_bound", nc_bound},
                             {"ktilde_max", best.value},
                             {"ktilde_max_state", state},
                             {"violates_noncontextual_bound", violates},
                             {"kcbs_constants", {{"published", to_json(published)}, {"derived", to_json(derived_bounds())}}}};
    return {ok, round_reals(std::move(report))};
}

}  // namespace kcbs
