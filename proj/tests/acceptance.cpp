// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "kcbs/report.hpp"
#include "support.hpp"

using namespace kcbs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome
{
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

ProtocolConfig config(std::uint64_t rounds, std::uint64_t seed, EveStrategy eve = EveStrategy::absent(),
                      ProtocolMode mode = ProtocolMode::PrepareMeasure)
{
    ProtocolConfig cfg;
    cfg.rounds = rounds;
    cfg.seed = seed;
    cfg.eve = eve;
    cfg.mode = mode;
    return cfg;
}

Outcome ktilde_values()
{
    const auto start = Clock::now();
    const auto basis = standard_basis();
    const double k = ktilde(QutritState(0, 0, 1), basis);
    const double elapsed = seconds_since(start);
    const bool pass = std::abs(k - 0.4472135955) <= 1e-9 && k > 0.4 && elapsed < 1e-3;
    return {pass, fmt("ktilde=%.12f bound=0.4 time=%.1fus", k, elapsed * 1e6)};
}

Outcome pentagon()
{
    const auto basis = standard_basis();
    double worst_neighbor = 0.0, worst_d2 = 0.0;
    for (int i = 0; i < kSettings; ++i) {
        worst_neighbor = std::max(worst_neighbor, std::abs(inner_product(basis.vector(i), basis.vector((i + 1) % 5))));
        const double d2 = std::abs(inner_product(basis.vector(i), basis.vector((i + 2) % 5)));
        worst_d2 = std::max(worst_d2, std::abs(d2 - 0.618034));
    }
    return {worst_neighbor <= 1e-10 && worst_d2 <= 1e-6,
            fmt("max|<v_i|v_i+1>|=%.2e max|d2-0.618034|=%.2e", worst_neighbor, worst_d2)};
}

Outcome monogamy()
{
    const auto start = Clock::now();
    const auto cert = verify_monogamy_decomposition(JointGraphMode::PaperAbstract);
    const double elapsed = seconds_since(start);
    const bool pass = cert.valid() && cert.chordal[0] && cert.chordal[1] && cert.alpha[0] == 2 &&
                      cert.alpha[1] == 2 && cert.alpha[0] + cert.alpha[1] == 4 && cert.normalization == 5 &&
                      elapsed < 1.0;
    return {pass, fmt("chordal=%d,%d alpha=%d,%d bound=%d/%d deterministic_max=%d clique_cover=%d time=%.1fms",
                      int(cert.chordal[0]), int(cert.chordal[1]), cert.alpha[0], cert.alpha[1],
                      cert.alpha[0] + cert.alpha[1], cert.normalization, cert.deterministic_max, cert.clique_cover,
                      elapsed * 1e3)};
}

Outcome ideal_statistics()
{
    const auto start = Clock::now();
    const auto result = run_simulation(config(100000, 7), threads());
    const double elapsed = seconds_since(start);
    const auto& s = result.key_stats;
    const bool pass = std::abs(s.sift_rate - 0.6) <= 0.006 && std::abs(s.p0 - 1.0 / 3) <= 0.01 &&
                      std::abs(s.p1 - 2.0 / 3) <= 0.01 && std::abs(s.shannon - 0.9183) <= 0.002 &&
                      std::abs(s.key_rate_per_transmission - 0.551) <= 0.005 && s.anticorr_fraction == 1.0 &&
                      elapsed < 10.0;
    return {pass, fmt("sift=%.4f p0=%.4f p1=%.4f S=%.4f rate=%.4f anticorr=%.6f time=%.2fs", s.sift_rate, s.p0,
                      s.p1, s.shannon, s.key_rate_per_transmission, s.anticorr_fraction, elapsed)};
}

std::vector<double> round_histogram(const Transcript& t)
{
    std::vector<double> h(50, 0.0);
    for (const auto& r : t.rounds) h[static_cast<std::size_t>((r.alice_setting * 5 + r.bob_setting) * 2 + r.bob_outcome)] += 1;
    return h;
}

Outcome entangled()
{
    const auto ent = run_session(config(100000, 21, EveStrategy::absent(), ProtocolMode::Entangled), threads());
    const auto pm = run_session(config(100000, 22), threads());
    const auto s = key_stats(ent);
    const auto chi = test::chi_square_homogeneity(round_histogram(ent), round_histogram(pm));
    const bool pass = std::abs(s.attempt_success_rate - 1.0 / 3) <= 0.005 && chi.p_value > 0.01;
    return {pass, fmt("attempt_success=%.5f chi2=%.2f dof=%d p=%.3f", s.attempt_success_rate, chi.statistic, chi.dof,
                      chi.p_value)};
}

Outcome adversary()
{
    const auto start = Clock::now();
    const auto cfg = config(1000000, 7, EveStrategy::fixed(1, ResendPolicy::CollapsedState));
    const auto result = run_simulation(cfg, threads());
    const double elapsed = seconds_since(start);
    const auto oracle = attack_expectation(cfg.eve, cfg.basis);
    const double n = double(result.key_stats.sifted);
    const double kab = result.key_stats.anticorr_fraction;
    const double pe = estimate_pe(result.transcript);
    const double kab_sigma = std::sqrt(oracle.kab_expected * (1 - oracle.kab_expected) / n);
    const double pe_sigma = std::sqrt(oracle.pe_expected * (1 - oracle.pe_expected) / n);
    const double kab_z = (kab - oracle.kab_expected) / kab_sigma;
    const double pe_z = (pe - oracle.pe_expected) / pe_sigma;
    const bool chain = result.security.kab_estimate > *result.security.pe_estimate &&
                       oracle.kab_expected > oracle.pe_expected;
    const bool pass = std::abs(kab_z) <= 4 && std::abs(pe_z) <= 4 && chain && elapsed < 60.0;
    return {pass, fmt("kab=%.6f (oracle %.6f, z=%+.2f) pe=%.6f (oracle %.6f, z=%+.2f) PB>PE=%d verdict=%s time=%.2fs",
                      kab, oracle.kab_expected, kab_z, pe, oracle.pe_expected, pe_z, int(chain),
                      to_string(result.security.verdict), elapsed)};
}

Transcript synthetic(double fraction, std::size_t sifted, std::uint64_t seed)
{
    Transcript t{config(sifted, seed), {}};
    const auto anti = static_cast<std::size_t>(std::llround(fraction * double(sifted)));
    std::vector<int> differs(sifted, 0);
    std::fill(differs.begin(), differs.begin() + static_cast<std::ptrdiff_t>(anti), 1);
    std::mt19937_64 gen(seed);
    std::shuffle(differs.begin(), differs.end(), gen);
    for (std::size_t k = 0; k < sifted; ++k) {
        RoundRecord r;
        r.index = k;
        const int alice = k % 3 == 0 ? 0 : 1;
        r.alice_setting = 0;
        r.bob_setting = alice == 0 ? 0 : 1;
        r.sift_case = alice == 0 ? SiftCase::C1 : SiftCase::C2;
        r.alice_bit = alice;
        r.bob_bit = differs[k] ? 1 - alice : alice;
        r.bob_outcome = *r.bob_bit;
        t.rounds.push_back(r);
    }
    return t;
}

Outcome threshold()
{
    constexpr std::size_t n = 40000;
    std::string detail;
    bool pass = true;
    const std::array<std::pair<double, Verdict>, 3> cases{
        {{0.60, Verdict::Insecure}, {0.625, Verdict::Inconclusive}, {0.65, Verdict::Secure}}};
    for (const auto& [fraction, expected] : cases) {
        RngStream rng(5, kSacrificeStream);
        const auto r = estimate_security(synthetic(fraction, n, 5), 0.5, rng);
        pass = pass && r.verdict == expected;
        detail += fmt("%.3f->%s (k=%.4f+-%.4f) ", fraction, to_string(r.verdict), r.kab_estimate,
                      r.confidence_halfwidth);
    }
    return {pass, detail};
}

Outcome properties()
{
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<int> size(1, 9);
    std::uniform_real_distribution<double> density(0.15, 0.85);
    int alpha_ok = 0, chordal_ok = 0;
    constexpr int instances = 200;
    for (int k = 0; k < instances; ++k) {
        const auto g = test::random_graph(gen, size(gen), density(gen));
        alpha_ok += independence_number(g, EdgeKind::Exclusive) == noncontextual_max(g);
        chordal_ok += is_chordal(g) == !test::has_long_induced_cycle(g);
    }

    const std::array<ProtocolConfig, 3> configs{
        config(20000, 1), config(20000, 2, EveStrategy::fixed(1)),
        config(20000, 3, EveStrategy::random(ResendPolicy::EigenstateOnClick), ProtocolMode::Entangled)};
    int identical = 0;
    for (const auto& cfg : configs) {
        const auto reference = run_simulation(cfg, 1).report.dump(2);
        bool same = true;
        for (unsigned t : {2u, 4u, 7u}) same = same && run_simulation(cfg, t).report.dump(2) == reference;
        identical += same;
    }
    const bool pass = alpha_ok == instances && chordal_ok == instances && identical == 3;
    return {pass, fmt("alpha=%d/%d chordal=%d/%d deterministic_configs=%d/3", alpha_ok, instances, chordal_ok,
                      instances, identical)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 ktilde at the maximally violating state", ktilde_values},
        {"2 pentagon overlaps", pentagon},
        {"3 monogamy certificate", monogamy},
        {"4 ideal protocol statistics", ideal_statistics},
        {"5 entangled mode", entangled},
        {"6 intercept-resend oracle agreement", adversary},
        {"7 security threshold verdicts", threshold},
        {"8 graph properties and determinism", properties},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o{false, ""};
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s [%s] %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
