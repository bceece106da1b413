// kcbs-qkd: scenario verification, monogamy certificates and protocol simulation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "kcbs/report.hpp"

namespace {

constexpr int kExitError = 1;

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

kcbs::KcbsBasis load_basis(const std::string& path)
{
    return path.empty() ? kcbs::standard_basis() : kcbs::basis_from_json(read_json(path));
}

unsigned worker_count()
{
    const char* env = std::getenv("KCBS_THREADS");
    if (env == nullptr || *env == '\0') return std::max(1u, std::thread::hardware_concurrency());
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw std::invalid_argument("KCBS_THREADS must be a positive integer");
    return static_cast<unsigned>(n);
}

int cmd_verify(const std::string& basis_path, bool json)
{
    const auto result = kcbs::verify_basis(load_basis(basis_path));
    if (json) {
        std::cout << result.report.dump(2) << '\n';
    } else {
        char line[64];
        std::snprintf(line, sizeof line, "ktilde_max %.6f\n", result.report["ktilde_max"].get<double>());
        std::cout << line;
        std::snprintf(line, sizeof line, "noncontextual_bound %.6f\n",
                      result.report["noncontextual_bound"].get<double>());
        std::cout << line;
        std::snprintf(line, sizeof line, "max_neighbor_overlap %.3g\n",
                      result.report["max_neighbor_overlap"].get<double>());
        std::cout << line;
        std::cout << "pentagon " << (result.ok ? "ok" : "FAILED") << '\n';
    }
    if (!result.ok) std::cerr << "verify: scenario invariant failed\n";
    return result.ok ? 0 : kExitError;
}

int cmd_monogamy(const std::string& mode, const std::string& graph_path, const std::string& out_path)
{
    kcbs::MonogamyCertificate cert = [&] {
        if (graph_path.empty()) {
            return kcbs::verify_monogamy_decomposition(kcbs::joint_graph_mode_from_string(mode));
        }
        const auto doc = read_json(graph_path);
        const auto graph = kcbs::context_graph_from_json(doc.contains("graph") ? doc.at("graph") : doc);
        const auto parts = doc.at("parts").get<std::array<std::vector<int>, 2>>();
        std::optional<std::array<int, 2>> expected;
        if (doc.contains("expected_alpha")) expected = doc.at("expected_alpha").get<std::array<int, 2>>();
        return kcbs::certify_decomposition(graph, parts, doc.value("mode", std::string("custom")),
                                           doc.value("normalization", 5), expected);
    }();

    const std::string text = kcbs::round_reals(kcbs::to_json(cert)).dump(2) + "\n";
    if (!out_path.empty()) kcbs::write_file_atomic(out_path, text);
    std::cout << text;
    for (const auto& f : cert.failures) std::cerr << "monogamy: check failed: " << f << '\n';
    return cert.valid() ? 0 : kExitError;
}

struct SimulateOptions
{
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    std::string mode = "prepare";
    std::string eve = "absent";
    std::string resend;
    double intercept_rate = 1.0;
    double sacrifice = 0.1;
    std::string basis;
    std::string out;
    std::string transcript;
    bool json = false;
};

int cmd_simulate(const SimulateOptions& o, bool eve_given)
{
    kcbs::ProtocolConfig cfg;
    cfg.mode = kcbs::protocol_mode_from_string(o.mode);
    cfg.basis = load_basis(o.basis);
    cfg.rounds = o.rounds;
    cfg.seed = o.seed;
    cfg.sacrifice_fraction = o.sacrifice;
    cfg.eve = kcbs::eve_strategy_from_string(o.eve);
    if (!o.resend.empty()) {
        if (!eve_given || !cfg.eve.present()) throw std::invalid_argument("--resend requires an eavesdropper (--eve)");
        cfg.eve.resend = kcbs::resend_policy_from_string(o.resend);
    }
    if (o.intercept_rate != 1.0 && !cfg.eve.present()) {
        throw std::invalid_argument("--intercept-rate requires an eavesdropper (--eve)");
    }
    cfg.eve.intercept_rate = o.intercept_rate;

    const auto result = kcbs::run_simulation(cfg, worker_count());
    const std::string text = result.report.dump(2) + "\n";
    if (!o.out.empty()) kcbs::write_file_atomic(o.out, text);
    if (!o.transcript.empty()) {
        std::ostringstream csv;
        kcbs::write_transcript_csv(csv, result.transcript);
        kcbs::write_file_atomic(o.transcript, csv.str());
    }
    std::cout << (o.json ? text : kcbs::human_summary(result.report));
    return kcbs::exit_code_for(result.security.verdict);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"KCBS contextuality key distribution: verification, monogamy certificates and simulation"};
    app.set_version_flag("--version", kcbs::kToolVersion);
    app.require_subcommand(1);

    std::string verify_basis;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "Check the pentagon scenario and the ktilde extremes");
    verify->add_option("--basis", verify_basis, "JSON file with five basis vectors (default: standard basis)");
    verify->add_flag("--json", verify_json, "Print the machine-readable report");

    std::string mono_mode = "paper-abstract";
    std::string mono_graph;
    std::string mono_out;
    auto* monogamy = app.add_subcommand("monogamy", "Emit the monogamy certificate of the joint commutation graph");
    monogamy->add_option("--mode", mono_mode, "paper-abstract or mimic")
        ->check(CLI::IsMember({"paper-abstract", "mimic"}));
    monogamy->add_option("--graph", mono_graph, "JSON file with a custom graph and two-part decomposition");
    monogamy->add_option("--out", mono_out, "Also write the certificate to this file");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run the protocol and write a report");
    simulate->add_option("--rounds", sim.rounds, "Number of rounds")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "64-bit seed")->required();
    simulate->add_option("--mode", sim.mode, "prepare or entangled")->check(CLI::IsMember({"prepare", "entangled"}));
    auto* eve_opt = simulate->add_option("--eve", sim.eve, "absent, fixed:K or random");
    simulate->add_option("--resend", sim.resend, "collapsed or eigenstate")
        ->check(CLI::IsMember({"collapsed", "eigenstate"}));
    simulate->add_option("--intercept-rate", sim.intercept_rate, "Fraction of rounds Eve intercepts")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--sacrifice", sim.sacrifice, "Fraction of sifted rounds published for the security test")
        ->check(CLI::Range(0.0, 0.5));
    simulate->add_option("--basis", sim.basis, "JSON file with five basis vectors");
    simulate->add_option("--out", sim.out, "Report JSON path");
    simulate->add_option("--transcript", sim.transcript, "Per-round CSV path");
    simulate->add_flag("--json", sim.json, "Print the report instead of the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*verify) return cmd_verify(verify_basis, verify_json);
        if (*monogamy) return cmd_monogamy(mono_mode, mono_graph, mono_out);
        if (*simulate) return cmd_simulate(sim, eve_opt->count() > 0);
    } catch (const std::exception& e) {
        std::cerr << "kcbs-qkd: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
