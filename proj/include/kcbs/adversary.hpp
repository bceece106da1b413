#pragma once

// Intercept-resend eavesdroppers, the guessing rule, and an exact
// density-matrix oracle for their effect on the protocol statistics.

#include <array>
#include <optional>
#include <string>

#include "kcbs/kcbs_scenario.hpp"
#include "kcbs/qutrit.hpp"
#include "kcbs/rng.hpp"

namespace kcbs {

struct Transcript;

enum class EveKind
{
    Absent,
    InterceptResendFixed,
    InterceptResendRandom
};

enum class ResendPolicy
{
    /// Forward the post-measurement state.
    CollapsedState,
    /// Forward v_k on a click, the post-measurement state otherwise.
    EigenstateOnClick
};

struct EveStrategy
{
    EveKind kind = EveKind::Absent;
    /// Measurement setting for InterceptResendFixed.
    int setting = 0;
    ResendPolicy resend = ResendPolicy::CollapsedState;
    /// Fraction of rounds intercepted, in [0, 1].
    double intercept_rate = 1.0;

    static EveStrategy absent() { return {}; }
    static EveStrategy fixed(int k, ResendPolicy resend = ResendPolicy::CollapsedState)
    {
        return {EveKind::InterceptResendFixed, k, resend, 1.0};
    }
    static EveStrategy random(ResendPolicy resend = ResendPolicy::CollapsedState)
    {
        return {EveKind::InterceptResendRandom, 0, resend, 1.0};
    }

    bool present() const { return kind != EveKind::Absent; }
};

/// "absent", "fixed:K" or "random".
std::string to_string(const EveStrategy& eve);
EveStrategy eve_strategy_from_string(const std::string& s);
std::string to_string(ResendPolicy policy);
ResendPolicy resend_policy_from_string(const std::string& s);

struct EveRecord
{
    int setting;
    int outcome;
    int guess;
};

struct Interception
{
    QutritState resent;
    EveRecord record;
};

/// Eve's guess of Alice's sifted bit: a click (e = 1) suggests i = k, where
/// Alice writes 0 only if Bob also chose k; no click suggests Alice writes 1.
constexpr int eve_guess(int outcome) { return outcome == 1 ? 0 : 1; }

/// Measures {Pi_k, I - Pi_k} on the in-flight state and builds the resent state.
/// Throws std::invalid_argument for an absent strategy.
Interception intercept(const EveStrategy& strategy, const QutritState& in_flight, const KcbsBasis& basis,
                       RngStream& rng);

/// Expected values of an attack, by exact enumeration of Alice's preparation,
/// Eve's setting and outcome, and Bob's setting. No sampling.
struct AttackExpectation
{
    /// P(bob_bit != alice_bit) over sifted rounds, Eve intercepting at the configured rate.
    double kab_expected = 0.0;
    /// P(eve_guess == alice_bit) over sifted rounds in which Eve intercepted.
    double pe_expected = 0.0;
    /// (1/5) sum_i P(a != e | i): Eve's analogue of the anti-correlation functional.
    double kae_expected = 0.0;
    /// (3/5) max_i P(a != e | i) + 1/5: the no-disturbance form for a fixed setting.
    double kae_no_disturbance_form = 0.0;
    /// [i][j]; NaN where (i, j) is not sifted.
    std::array<std::array<double, kSettings>, kSettings> anticorr{};
    std::array<std::array<double, kSettings>, kSettings> eve_success{};
    /// P(e = 1 | i)
    std::array<double, kSettings> eve_click{};
};

AttackExpectation attack_expectation(const EveStrategy& strategy, const KcbsBasis& basis);

/// Fraction of sifted, intercepted rounds in which Eve's guess equals Alice's bit.
/// Throws std::invalid_argument when the transcript has no such rounds.
double estimate_pe(const Transcript& t);

nlohmann::json to_json(const EveStrategy& s);
nlohmann::json to_json(const AttackExpectation& a);

}  // namespace kcbs
