#include "kcbs/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace kcbs {

std::string to_string(ProtocolMode mode) { return mode == ProtocolMode::PrepareMeasure ? "prepare" : "entangled"; }

ProtocolMode protocol_mode_from_string(const std::string& s)
{
    if (s == "prepare") return ProtocolMode::PrepareMeasure;
    if (s == "entangled") return ProtocolMode::Entangled;
    throw std::invalid_argument("mode must be prepare or entangled; got '" + s + "'");
}

const char* to_string(SiftCase c)
{
    switch (c) {
    case SiftCase::C1: return "C1";
    case SiftCase::C2: return "C2";
    case SiftCase::C3: return "C3";
    }
    return "C3";
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Secure: return "Secure";
    case Verdict::Insecure: return "Insecure";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

void validate(const ProtocolConfig& cfg, bool verdict_requested)
{
    if (cfg.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (!(cfg.sacrifice_fraction >= 0.0 && cfg.sacrifice_fraction <= 0.5)) {
        throw std::invalid_argument("sacrifice fraction must lie in [0, 0.5]");
    }
    if (cfg.eve.present()) {
        if (cfg.eve.kind == EveKind::InterceptResendFixed && (cfg.eve.setting < 0 || cfg.eve.setting >= kSettings)) {
            throw std::invalid_argument("eve setting must lie in 0..4");
        }
        if (!(cfg.eve.intercept_rate >= 0.0 && cfg.eve.intercept_rate <= 1.0)) {
            throw std::invalid_argument("intercept rate must lie in [0, 1]");
        }
    }
    if (verdict_requested && cfg.sacrifice_fraction * double(cfg.rounds) < double(kMinSacrifice)) {
        throw std::invalid_argument("sacrifice_fraction * rounds must be at least 100 for a security verdict");
    }
}

namespace {

RoundRecord play_round(const ProtocolConfig& cfg, std::uint64_t index, std::optional<int> forced_alice,
                       std::optional<int> forced_bob)
{
    RngStream rng(cfg.seed, index);
    RoundRecord rec;
    rec.index = index;

    auto draw_setting = [&](std::optional<int> forced) {
        return forced ? *forced : static_cast<int>(rng.uniform_index(kSettings));
    };

    // Alice's preparation, or her heralded half of an entangled pair.
    std::optional<QutritState> in_flight;
    if (cfg.mode == ProtocolMode::PrepareMeasure) {
        rec.alice_setting = draw_setting(forced_alice);
        in_flight = cfg.basis.vector(rec.alice_setting);
    } else {
        static const TwoQutritState pair = TwoQutritState::maximally_entangled();
        rec.attempts = 0;
        while (!in_flight) {
            ++rec.attempts;
            rec.alice_setting = draw_setting(forced_alice);
            auto collapse = entangled_collapse(pair, cfg.basis.projector(rec.alice_setting), rng);
            if (collapse.outcome == 1) in_flight = std::move(collapse.bob_state);
        }
    }

    if (cfg.eve.present()) {
        const bool intercepted = cfg.eve.intercept_rate >= 1.0 || rng.uniform() < cfg.eve.intercept_rate;
        if (intercepted) {
            auto hit = intercept(cfg.eve, *in_flight, cfg.basis, rng);
            in_flight = std::move(hit.resent);
            rec.eve = hit.record;
        }
    }

    // Bob measures, then announces j; Alice announces success after hearing j.
    rec.bob_setting = draw_setting(forced_bob);
    rec.bob_outcome = measure(*in_flight, cfg.basis.projector(rec.bob_setting), rng).outcome;
    rec.sift_case = sift_case(rec.alice_setting, rec.bob_setting);
    if (rec.sifted()) {
        rec.alice_bit = rec.sift_case == SiftCase::C1 ? 0 : 1;
        rec.bob_bit = rec.bob_outcome;
    }
    return rec;
}

}  // namespace

RoundRecord run_round(const ProtocolConfig& cfg, std::uint64_t index)
{
    return play_round(cfg, index, std::nullopt, std::nullopt);
}

RoundRecord run_round(const ProtocolConfig& cfg, std::uint64_t index, int alice_setting, int bob_setting)
{
    if (alice_setting < 0 || alice_setting >= kSettings || bob_setting < 0 || bob_setting >= kSettings) {
        throw std::invalid_argument("settings must lie in 0..4");
    }
    return play_round(cfg, index, alice_setting, bob_setting);
}

Transcript run_session(const ProtocolConfig& cfg, unsigned threads)
{
    validate(cfg, false);
    Transcript t{cfg, std::vector<RoundRecord>(cfg.rounds)};
    const std::uint64_t n = cfg.rounds;
    const std::uint64_t workers = std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(1, n / 1024));

    auto fill = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) t.rounds[r] = run_round(cfg, r);
    };
    if (workers == 1) {
        fill(0, n);
        return t;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (n + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(n, begin + chunk);
            if (begin < end) pool.emplace_back(fill, begin, end);
        }
    }
    return t;
}

KeyStats key_stats(const Transcript& t)
{
    KeyStats s;
    s.rounds = t.rounds.size();
    std::uint64_t zeros = 0;
    std::uint64_t anti = 0;
    for (const auto& r : t.rounds) {
        s.attempts += r.attempts;
        if (!r.sifted()) continue;
        ++s.sifted;
        if (*r.alice_bit == 0) ++zeros;
        if (*r.bob_bit != *r.alice_bit) ++anti;
    }
    if (s.sifted == 0) throw std::invalid_argument("transcript has no sifted rounds");
    s.sift_rate = double(s.sifted) / double(s.rounds);
    s.p0 = double(zeros) / double(s.sifted);
    s.p1 = 1.0 - s.p0;
    s.shannon = binary_entropy(s.p0);
    s.key_rate_per_transmission = s.sift_rate * s.shannon;
    s.anticorr_fraction = double(anti) / double(s.sifted);
    s.attempt_success_rate = s.attempts > 0 ? double(s.rounds) / double(s.attempts) : 1.0;
    return s;
}

double confidence_halfwidth(double kab_estimate, std::size_t sample_size)
{
    if (sample_size == 0) return 1.0;
    const double m = double(sample_size);
    if (kab_estimate <= 0.0 || kab_estimate >= 1.0) return 1.0 / m;
    return 3.0 * std::sqrt(kab_estimate * (1.0 - kab_estimate) / m);
}

Verdict verdict_for(double kab_estimate, double halfwidth)
{
    const double threshold = bounds().security_threshold.value();
    if (kab_estimate - halfwidth > threshold) return Verdict::Secure;
    if (kab_estimate + halfwidth < threshold) return Verdict::Insecure;
    return Verdict::Inconclusive;
}

SecurityReport estimate_security(const Transcript& t, double sacrifice_fraction, RngStream& rng)
{
    if (!(sacrifice_fraction >= 0.0 && sacrifice_fraction <= 0.5)) {
        throw std::invalid_argument("sacrifice fraction must lie in [0, 0.5]");
    }
    std::vector<std::size_t> sifted;
    for (std::size_t r = 0; r < t.rounds.size(); ++r) {
        if (t.rounds[r].sifted()) sifted.push_back(r);
    }

    SecurityReport report;
    const auto m = static_cast<std::size_t>(std::floor(sacrifice_fraction * double(sifted.size())));
    // Partial Fisher-Yates: the first m entries become a uniform sample without replacement.
    for (std::size_t a = 0; a < m; ++a) {
        const auto b = a + rng.uniform_index(static_cast<std::uint32_t>(sifted.size() - a));
        std::swap(sifted[a], sifted[b]);
    }
    std::sort(sifted.begin(), sifted.begin() + static_cast<std::ptrdiff_t>(m));

    std::size_t anti = 0;
    for (std::size_t a = 0; a < m; ++a) {
        const auto& r = t.rounds[sifted[a]];
        report.sacrificed_rounds.push_back(r.index);
        if (*r.bob_bit != *r.alice_bit) ++anti;
    }
    report.sample_size = m;
    report.final_key_length = sifted.size() - m;
    report.kab_estimate = m > 0 ? double(anti) / double(m) : std::numeric_limits<double>::quiet_NaN();
    report.confidence_halfwidth = confidence_halfwidth(report.kab_estimate, m);
    if (m < kMinSacrifice) {
        report.verdict = Verdict::Inconclusive;
        report.note = "sacrificed sample of " + std::to_string(m) + " sifted rounds is below the minimum of " +
                      std::to_string(kMinSacrifice);
    } else {
        report.verdict = verdict_for(report.kab_estimate, report.confidence_halfwidth);
    }

    // Diagnostics over every sifted round; these use Eve's record, which Alice and Bob never see.
    std::vector<std::uint8_t> alice, bob, eve_alice, eve;
    for (const auto& r : t.rounds) {
        if (!r.sifted()) continue;
        alice.push_back(static_cast<std::uint8_t>(*r.alice_bit));
        bob.push_back(static_cast<std::uint8_t>(*r.bob_bit));
        if (r.eve) {
            eve_alice.push_back(static_cast<std::uint8_t>(*r.alice_bit));
            eve.push_back(static_cast<std::uint8_t>(r.eve->guess));
        }
    }
    if (alice.size() >= kMinSacrifice) report.mutual_info_ab = mutual_information(alice, bob);
    if (eve.size() >= kMinSacrifice) report.mutual_info_ae = mutual_information(eve_alice, eve);
    if (!eve.empty()) report.pe_estimate = estimate_pe(t);
    return report;
}

double binary_entropy(double p)
{
    auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
    return term(p) + term(1.0 - p);
}

double shannon_entropy(std::span<const std::uint8_t> bits)
{
    if (bits.empty()) return 0.0;
    const auto ones = std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
    return binary_entropy(double(ones) / double(bits.size()));
}

double mutual_information(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y)
{
    if (x.size() != y.size()) throw std::invalid_argument("mutual information needs equal-length sequences");
    if (x.size() < kMinSacrifice) throw std::invalid_argument("mutual information needs at least 100 samples");
    std::array<std::array<double, 2>, 2> joint{};
    for (std::size_t n = 0; n < x.size(); ++n) joint[x[n] != 0][y[n] != 0] += 1.0;
    const double total = double(x.size());
    const std::array<double, 2> px{joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
    const std::array<double, 2> py{joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
    double info = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (joint[a][b] == 0.0) continue;
            info += joint[a][b] / total * std::log2(joint[a][b] * total / (px[a] * py[b]));
        }
    }
    return std::max(info, 0.0);
}

void write_transcript_csv(std::ostream& out, const Transcript& t)
{
    auto opt = [&](const std::optional<int>& v) {
        if (v) out << *v;
    };
    out << "index,i,j,case,bob_outcome,alice_bit,bob_bit,eve_setting,eve_outcome,eve_guess\n";
    for (const auto& r : t.rounds) {
        out << r.index << ',' << r.alice_setting << ',' << r.bob_setting << ',' << to_string(r.sift_case) << ','
            << r.bob_outcome << ',';
        opt(r.alice_bit);
        out << ',';
        opt(r.bob_bit);
        out << ',';
        if (r.eve) out << r.eve->setting << ',' << r.eve->outcome << ',' << r.eve->guess;
        else out << ",,";
        out << '\n';
    }
}

nlohmann::json to_json(const ProtocolConfig& c)
{
    return {{"mode", to_string(c.mode)},
            {"rounds", c.rounds},
            {"sacrifice_fraction", c.sacrifice_fraction},
            {"eve", to_json(c.eve)},
            {"seed", c.seed}};
}

nlohmann::json to_json(const KeyStats& s)
{
    return {{"rounds", s.rounds},
            {"sifted", s.sifted},
            {"sift_rate", s.sift_rate},
            {"p0", s.p0},
            {"p1", s.p1},
            {"shannon", s.shannon},
            {"key_rate_per_transmission", s.key_rate_per_transmission},
            {"anticorr_fraction", s.anticorr_fraction},
            {"attempts", s.attempts},
            {"attempt_success_rate", s.attempt_success_rate}};
}

nlohmann::json to_json(const SecurityReport& r)
{
    auto optional = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    return {{"kab_estimate", std::isnan(r.kab_estimate) ? nlohmann::json() : nlohmann::json(r.kab_estimate)},
            {"confidence_halfwidth", r.confidence_halfwidth},
            {"sample_size", r.sample_size},
            {"threshold", r.threshold.value()},
            {"verdict", to_string(r.verdict)},
            {"pe_estimate", optional(r.pe_estimate)},
            {"mutual_info_ab", optional(r.mutual_info_ab)},
            {"mutual_info_ae", optional(r.mutual_info_ae)},
            {"final_key_length", r.final_key_length},
            {"note", r.note}};
}

}  // namespace kcbs
