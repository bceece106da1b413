#include "kcbs/adversary.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kcbs/protocol.hpp"

namespace kcbs {

namespace {

using Density = Eigen::Matrix3cd;

/// One branch of Eve's measurement: unnormalized state forwarded to Bob.
struct Branch
{
    int outcome;
    Density resent;  // trace = branch probability
};

std::vector<Branch> eve_branches(const Density& rho, const KcbsBasis& basis, int k, ResendPolicy resend)
{
    const Density& p = basis.projector(k).matrix();
    const Density q = Density::Identity() - p;
    const double click = (p * rho * p).trace().real();
    std::vector<Branch> out;
    if (click > 0.0) {
        const Density forwarded = resend == ResendPolicy::EigenstateOnClick ? Density(click * p) : Density(p * rho * p);
        out.push_back({1, forwarded});
    }
    const Density miss = q * rho * q;
    if (miss.trace().real() > 0.0) out.push_back({0, miss});
    return out;
}

}  // namespace

std::string to_string(const EveStrategy& eve)
{
    switch (eve.kind) {
    case EveKind::Absent: return "absent";
    case EveKind::InterceptResendFixed: return "fixed:" + std::to_string(eve.setting);
    case EveKind::InterceptResendRandom: return "random";
    }
    return "absent";
}

EveStrategy eve_strategy_from_string(const std::string& s)
{
    if (s == "absent") return EveStrategy::absent();
    if (s == "random") return EveStrategy::random();
    if (s.rfind("fixed:", 0) == 0 && s.size() == 7 && s[6] >= '0' && s[6] <= '4') {
        return EveStrategy::fixed(s[6] - '0');
    }
    throw std::invalid_argument("eve must be absent, fixed:K with K in 0..4, or random; got '" + s + "'");
}

std::string to_string(ResendPolicy policy)
{
    return policy == ResendPolicy::CollapsedState ? "collapsed" : "eigenstate";
}

ResendPolicy resend_policy_from_string(const std::string& s)
{
    if (s == "collapsed") return ResendPolicy::CollapsedState;
    if (s == "eigenstate") return ResendPolicy::EigenstateOnClick;
    throw std::invalid_argument("resend must be collapsed or eigenstate; got '" + s + "'");
}

Interception intercept(const EveStrategy& strategy, const QutritState& in_flight, const KcbsBasis& basis,
                       RngStream& rng)
{
    if (!strategy.present()) throw std::invalid_argument("intercept requires an eavesdropper");
    const int k = strategy.kind == EveKind::InterceptResendFixed ? strategy.setting
                                                                 : static_cast<int>(rng.uniform_index(kSettings));
    const auto m = measure(in_flight, basis.projector(k), rng);
    const EveRecord record{k, m.outcome, eve_guess(m.outcome)};
    if (m.outcome == 1 && strategy.resend == ResendPolicy::EigenstateOnClick) {
        return {basis.vector(k), record};
    }
    return {m.post_state, record};
}

AttackExpectation attack_expectation(const EveStrategy& strategy, const KcbsBasis& basis)
{
    if (!strategy.present()) throw std::invalid_argument("attack_expectation requires an eavesdropper");

    std::vector<int> settings;
    if (strategy.kind == EveKind::InterceptResendFixed) {
        settings.push_back(strategy.setting);
    } else {
        for (int k = 0; k < kSettings; ++k) settings.push_back(k);
    }
    const double setting_weight = 1.0 / static_cast<double>(settings.size());
    const double rate = strategy.intercept_rate;

    AttackExpectation out;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto& row : out.anticorr) row.fill(nan);
    for (auto& row : out.eve_success) row.fill(nan);

    double kab_sum = 0.0;
    double pe_sum = 0.0;
    int sifted_pairs = 0;
    std::array<double, kSettings> per_alice_success{};

    for (int i = 0; i < kSettings; ++i) {
        const auto& v = basis.vector(i).amplitudes();
        const Density rho = v * v.adjoint();
        double click = 0.0;
        for (int j = 0; j < kSettings; ++j) {
            if (!in_context(i, j)) continue;
            const int alice_bit = i == j ? 0 : 1;
            const Density& bob = basis.projector(j).matrix();
            double anticorr = 0.0;
            double success = 0.0;
            for (int k : settings) {
                for (const auto& branch : eve_branches(rho, basis, k, strategy.resend)) {
                    const double weight = branch.resent.trace().real();
                    const double bob_one = (bob * branch.resent).trace().real();  // joint with the branch
                    anticorr += setting_weight * (alice_bit == 0 ? bob_one : weight - bob_one);
                    if (eve_guess(branch.outcome) == alice_bit) success += setting_weight * weight;
                }
            }
            // Rounds Eve lets through are ideal.
            const double ideal = alice_bit == 0 ? (bob * rho).trace().real() : 1.0 - (bob * rho).trace().real();
            out.anticorr[i][j] = std::clamp(rate * anticorr + (1.0 - rate) * ideal, 0.0, 1.0);
            out.eve_success[i][j] = std::clamp(success, 0.0, 1.0);
            kab_sum += out.anticorr[i][j];
            pe_sum += success;
            per_alice_success[i] += success / 3.0;
            ++sifted_pairs;
        }
        for (int k : settings) {
            const Density& p = basis.projector(k).matrix();
            click += setting_weight * (p * rho).trace().real();
        }
        // Traces carry roundoff of order 1e-17 on either side of 0 and 1.
        out.eve_click[i] = std::clamp(click, 0.0, 1.0);
    }
    out.kab_expected = kab_sum / sifted_pairs;
    out.pe_expected = pe_sum / sifted_pairs;
    double kae = 0.0;
    for (double s : per_alice_success) kae += s / kSettings;
    out.kae_expected = kae;
    out.kae_no_disturbance_form =
        0.6 * *std::max_element(per_alice_success.begin(), per_alice_success.end()) + 0.2;
    return out;
}

double estimate_pe(const Transcript& t)
{
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    for (const auto& r : t.rounds) {
        if (!r.sifted() || !r.eve) continue;
        ++total;
        if (r.eve->guess == *r.alice_bit) ++hits;
    }
    if (total == 0) throw std::invalid_argument("transcript has no sifted rounds with an eavesdropper record");
    return double(hits) / double(total);
}

nlohmann::json to_json(const EveStrategy& s)
{
    nlohmann::json j = {{"kind", to_string(s)}};
    if (s.present()) {
        j["resend"] = to_string(s.resend);
        j["intercept_rate"] = s.intercept_rate;
    }
    return j;
}

nlohmann::json to_json(const AttackExpectation& a)
{
    auto table = [](const auto& t) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : t) {
            nlohmann::json r = nlohmann::json::array();
            for (double x : row) r.push_back(std::isnan(x) ? nlohmann::json() : nlohmann::json(x));
            rows.push_back(std::move(r));
        }
        return rows;
    };
    return {{"kab_expected", a.kab_expected},
            {"pe_expected", a.pe_expected},
            {"kae_expected", a.kae_expected},
            {"kae_no_disturbance_form", a.kae_no_disturbance_form},
            {"anticorr", table(a.anticorr)},
            {"eve_success", table(a.eve_success)},
            {"eve_click", a.eve_click}};
}

}  // namespace kcbs
