#pragma once

// The prepare-and-measure (and entanglement-assisted) key distribution
// protocol: rounds, sifting, key statistics and the security test.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kcbs/adversary.hpp"
#include "kcbs/kcbs_scenario.hpp"
#include "kcbs/rng.hpp"

namespace kcbs {

enum class ProtocolMode
{
    PrepareMeasure,
    Entangled
};

std::string to_string(ProtocolMode mode);
ProtocolMode protocol_mode_from_string(const std::string& s);

struct ProtocolConfig
{
    ProtocolMode mode = ProtocolMode::PrepareMeasure;
    KcbsBasis basis = standard_basis();
    std::uint64_t rounds = 1;
    double sacrifice_fraction = 0.1;
    EveStrategy eve;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when the config cannot be run. The sacrificed
/// sample must reach 100 rounds when a security verdict is requested.
void validate(const ProtocolConfig& cfg, bool verdict_requested);

/// Stream reserved for choosing the sacrificed subset; round streams use the round index.
inline constexpr std::uint64_t kSacrificeStream = ~std::uint64_t{0};

enum class SiftCase
{
    C1,  ///< same setting
    C2,  ///< neighbouring settings
    C3   ///< out of context, discarded
};

const char* to_string(SiftCase c);

constexpr SiftCase sift_case(int alice_setting, int bob_setting)
{
    if (alice_setting == bob_setting) return SiftCase::C1;
    return in_context(alice_setting, bob_setting) ? SiftCase::C2 : SiftCase::C3;
}

struct RoundRecord
{
    std::uint64_t index = 0;
    int alice_setting = 0;
    int bob_setting = 0;
    int bob_outcome = 0;
    SiftCase sift_case = SiftCase::C3;
    std::optional<int> alice_bit;
    std::optional<int> bob_bit;
    std::optional<EveRecord> eve;
    /// Entangled pairs consumed until Alice's outcome was 1 (always 1 in prepare-and-measure).
    std::uint32_t attempts = 1;

    bool sifted() const { return sift_case != SiftCase::C3; }
};

struct Transcript
{
    ProtocolConfig config;
    std::vector<RoundRecord> rounds;
};

/// One round with settings drawn from the round's stream (seed, index).
RoundRecord run_round(const ProtocolConfig& cfg, std::uint64_t index);

/// One round with Alice's and Bob's settings fixed by the caller.
RoundRecord run_round(const ProtocolConfig& cfg, std::uint64_t index, int alice_setting, int bob_setting);

/// All cfg.rounds rounds. Output is independent of `threads`.
Transcript run_session(const ProtocolConfig& cfg, unsigned threads = 1);

struct KeyStats
{
    std::uint64_t rounds = 0;
    std::uint64_t sifted = 0;
    double sift_rate = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double shannon = 0.0;
    double key_rate_per_transmission = 0.0;
    /// Fraction of sifted rounds with bob_bit != alice_bit.
    double anticorr_fraction = 0.0;
    std::uint64_t attempts = 0;
    /// rounds / attempts; 1 in prepare-and-measure mode.
    double attempt_success_rate = 1.0;
};

/// Throws std::invalid_argument when no round was sifted.
KeyStats key_stats(const Transcript& t);

enum class Verdict
{
    Secure,
    Insecure,
    Inconclusive
};

const char* to_string(Verdict v);

/// Secure iff kab - halfwidth > 5/8, Insecure iff kab + halfwidth < 5/8.
Verdict verdict_for(double kab_estimate, double halfwidth);

/// 3 sqrt(k(1 - k)/m), or 1/m when k is 0 or 1.
double confidence_halfwidth(double kab_estimate, std::size_t sample_size);

struct SecurityReport
{
    double kab_estimate = 0.0;
    double confidence_halfwidth = 0.0;
    std::size_t sample_size = 0;
    Fraction threshold = bounds().security_threshold;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> pe_estimate;
    std::optional<double> mutual_info_ab;
    std::optional<double> mutual_info_ae;
    /// Sifted rounds left for the key after the sacrificed sample is removed.
    std::size_t final_key_length = 0;
    std::vector<std::uint64_t> sacrificed_rounds;
    std::string note;
};

inline constexpr std::size_t kMinSacrifice = 100;

/// Publishes a uniformly chosen sample of sifted rounds and tests the
/// anti-correlation fraction on it against 5/8. C3 rounds never enter.
SecurityReport estimate_security(const Transcript& t, double sacrifice_fraction, RngStream& rng);

/// Plug-in entropy of a bit sequence, in bits.
double shannon_entropy(std::span<const std::uint8_t> bits);

/// Binary entropy h(p) with 0 log 0 = 0.
double binary_entropy(double p);

/// Plug-in mutual information in bits. Throws on length mismatch or fewer than 100 samples.
double mutual_information(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

/// index,i,j,case,bob_outcome,alice_bit,bob_bit,eve_setting,eve_outcome,eve_guess
void write_transcript_csv(std::ostream& out, const Transcript& t);

nlohmann::json to_json(const ProtocolConfig& c);
nlohmann::json to_json(const KeyStats& s);
nlohmann::json to_json(const SecurityReport& r);

}  // namespace kcbs
