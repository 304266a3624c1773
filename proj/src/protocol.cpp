#include "iontele/protocol.hpp"

#include "iontele/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>

namespace iontele {

namespace {

constexpr std::array<int, 4> kAliceIons{1, 3, 2, 5};

// Phonon paths below this conditional probability are rounding residue
// (cos(pi/2) is ~6e-17 in double, not 0) and are treated as unreachable.
constexpr double kNegligibleProb = 1e-20;

bool finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// The receiver's two pulses assume the reachable Fock levels stay below the
// truncation boundary.
void guard_top_fock_level(const StateVector& state) {
    const int top = state.layout().mode_dim() - 1;
    const auto amps = state.amps();
    double leaked = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (static_cast<int>(i % static_cast<std::size_t>(top + 1)) == top)
            leaked += std::norm(amps[i]);
    if (std::sqrt(leaked) > 1e-12)
        throw PhononLeakage("amplitude at the top Fock level before a pulse: " +
                            std::to_string(std::sqrt(leaked)));
}

// Payload state relocated onto ions (4,6), with the measured registers held
// at their post-measurement levels and the mode in |0>.
StateVector expected_output(const ProtocolParams& p, const AliceOutcome& o,
                            const RegisterLayout& layout) {
    const std::array<Cx, 4> payload{p.alpha, p.beta, p.gamma, p.delta};
    std::vector<Cx> amps(layout.dim(), Cx{});
    for (int p4 : {0, 1})
        for (int q6 : {0, 1}) {
            const std::array<int, 6> bits{o.ion1, o.ion2, o.ion3, p4, o.ion5, q6};
            amps[layout.basis_index(bits, 0)] = payload[static_cast<std::size_t>(p4 * 2 + q6)];
        }
    return StateVector(layout, std::move(amps));
}

void check_outcome_bits(const AliceOutcome& o) {
    for (const int bit : {o.ion1, o.ion3, o.ion2, o.ion5})
        if (bit != 0 && bit != 1)
            throw UnknownOutcome("outcome bits must be 0 (e) or 1 (g)");
}

}  // namespace

ProtocolParams validate_params(const ProtocolParams& raw) {
    for (const Cx z : {raw.alpha, raw.beta, raw.gamma, raw.delta, raw.a, raw.b, raw.c, raw.d})
        if (!finite(z)) throw NonFinite("parameters must be finite");

    const double payload =
        std::norm(raw.alpha) + std::norm(raw.beta) + std::norm(raw.gamma) + std::norm(raw.delta);
    if (std::abs(payload - 1.0) > kParamTol)
        throw NotNormalized("payload norm^2 = " + std::to_string(payload));
    const double ch34 = std::norm(raw.a) + std::norm(raw.b);
    if (std::abs(ch34 - 1.0) > kParamTol)
        throw NotNormalized("channel (3,4) norm^2 = " + std::to_string(ch34));
    const double ch56 = std::norm(raw.c) + std::norm(raw.d);
    if (std::abs(ch56 - 1.0) > kParamTol)
        throw NotNormalized("channel (5,6) norm^2 = " + std::to_string(ch56));

    if (std::abs(raw.b) > std::abs(raw.a) + kParamTol)
        throw OrderingViolated("|a| >= |b| required");
    if (std::abs(raw.d) > std::abs(raw.c) + kParamTol)
        throw OrderingViolated("|c| >= |d| required");
    return raw;
}

PulseSchedule pulse_times(const ProtocolParams& params, double phi) {
    const ProtocolParams p = validate_params(params);
    const double r1 = std::min(1.0, std::abs(p.d) / std::abs(p.c));
    const double r2 = std::min(1.0, std::abs(p.b) / std::abs(p.a));
    return PulseSchedule{std::acos(r1), std::acos(r2), phi};
}

AliceOutcome AliceOutcome::from_index(std::size_t k) {
    if (k >= 16) throw UnknownOutcome("outcome index " + std::to_string(k));
    return AliceOutcome{static_cast<int>(k >> 3 & 1), static_cast<int>(k >> 2 & 1),
                        static_cast<int>(k >> 1 & 1), static_cast<int>(k & 1)};
}

std::size_t AliceOutcome::index() const {
    check_outcome_bits(*this);
    return static_cast<std::size_t>(ion1 << 3 | ion3 << 2 | ion2 << 1 | ion5);
}

namespace {
char level_char(int bit) { return bit == 0 ? 'e' : 'g'; }
}

std::string AliceOutcome::label_13() const { return {level_char(ion1), level_char(ion3)}; }
std::string AliceOutcome::label_25() const { return {level_char(ion2), level_char(ion5)}; }
std::string AliceOutcome::label() const { return label_13() + "," + label_25(); }

RegisterLayout protocol_layout(int mode_dim) {
    return RegisterLayout({1, 2, 3, 4, 5, 6}, mode_dim);
}

StateVector prepare_initial(const ProtocolParams& params, int mode_dim) {
    const ProtocolParams p = validate_params(params);
    RegisterLayout layout = protocol_layout(mode_dim);
    const std::array<Cx, 4> payload{p.alpha, p.beta, p.gamma, p.delta};
    const std::array<Cx, 2> ch34{p.a, p.b};
    const std::array<Cx, 2> ch56{p.c, p.d};
    std::vector<Cx> amps(layout.dim(), Cx{});
    for (int x1 : {0, 1})
        for (int x2 : {0, 1})
            for (int y : {0, 1})
                for (int z : {0, 1}) {
                    const std::array<int, 6> bits{x1, x2, y, y, z, z};
                    amps[layout.basis_index(bits, 0)] =
                        payload[static_cast<std::size_t>(x1 * 2 + x2)] *
                        ch34[static_cast<std::size_t>(y)] * ch56[static_cast<std::size_t>(z)];
                }
    return StateVector(std::move(layout), std::move(amps));
}

StateVector alice_stage(const StateVector& state) {
    StateVector s = apply_local(ops::cnot(1, 3), state);
    s = apply_local(ops::cnot(2, 5), s);
    s = apply_local(ops::hadamard(1), s);
    return apply_local(ops::hadamard(2), s);
}

std::vector<Operator> correction_for(const AliceOutcome& outcome,
                                     const ProtocolParams& params) {
    check_outcome_bits(outcome);
    const ProtocolParams p = validate_params(params);
    std::vector<Operator> seq;
    seq.push_back(ops::collective_phase(p.theta4() - p.theta3(), p.theta2() - p.theta1(), 4, 6));
    if (outcome.ion3 == 1) seq.push_back(ops::pauli_x(4));
    if (outcome.ion5 == 1) seq.push_back(ops::pauli_x(6));
    if (outcome.ion1 == 1) seq.push_back(ops::pauli_z(4));
    if (outcome.ion2 == 1) seq.push_back(ops::pauli_z(6));
    return seq;
}

BobStageResult bob_stage(const StateVector& branch_state, const AliceOutcome& outcome,
                         const PulseSchedule& schedule, const ProtocolParams& params) {
    check_outcome_bits(outcome);
    const int mode_dim = branch_state.layout().mode_dim();
    BobStageResult result;

    guard_top_fock_level(branch_state);
    const StateVector pulsed1 = apply_local(
        ops::sideband_unitary({schedule.gt1, schedule.phi, mode_dim}, 6), branch_state);
    const MeasurementDistribution first = measure_phonon(pulsed1);

    for (std::size_t n = 0; n < first.outcomes.size(); ++n) {
        const MeasuredOutcome& o1 = first.outcomes[n];
        if (o1.probability <= kNegligibleProb) continue;
        if (n != 0) {
            result.paths.push_back(
                {BranchOutcome{outcome, static_cast<int>(n), std::nullopt},
                 o1.probability, std::nullopt, std::nullopt, std::nullopt});
            continue;
        }

        guard_top_fock_level(*o1.collapsed);
        const StateVector pulsed2 = apply_local(
            ops::sideband_unitary({schedule.gt2, schedule.phi, mode_dim}, 4), *o1.collapsed);
        const MeasurementDistribution second = measure_phonon(pulsed2);

        for (std::size_t m = 0; m < second.outcomes.size(); ++m) {
            const MeasuredOutcome& o2 = second.outcomes[m];
            if (o2.probability <= kNegligibleProb) continue;
            const double path_prob = o1.probability * o2.probability;
            if (m != 0) {
                result.paths.push_back(
                    {BranchOutcome{outcome, 0, static_cast<int>(m)}, path_prob,
                     std::nullopt, std::nullopt, std::nullopt});
                continue;
            }

            StateVector corrected = *o2.collapsed;
            for (const Operator& op : correction_for(outcome, params))
                corrected = apply_local(op, corrected);
            const StateVector target = expected_output(params, outcome, corrected.layout());
            const double fid = fidelity_mod_phase(corrected, target);
            const Cx phase = inner(target, corrected);
            result.success_probability += path_prob;
            result.paths.push_back({BranchOutcome{outcome, 0, 0}, path_prob,
                                    std::move(corrected), fid, phase});
        }
    }
    return result;
}

double analytic_success(const ProtocolParams& params) {
    const ProtocolParams p = validate_params(params);
    return 4.0 * std::norm(p.b) * std::norm(p.d);
}

ProtocolResult run_enumerate(const ProtocolParams& params, int mode_dim, double phi) {
    const ProtocolParams p = validate_params(params);
    ProtocolResult result;
    result.mode = RunMode::enumerate;
    result.mode_dim = mode_dim;
    result.analytic_success = analytic_success(p);

    const StateVector entangled = alice_stage(prepare_initial(p, mode_dim));
    const PulseSchedule schedule = pulse_times(p, phi);
    const MeasurementDistribution alice =
        measure_qubits(entangled, std::span<const int>(kAliceIons));

    result.per_branch.resize(16);
    for (std::size_t k = 0; k < 16; ++k) {
        BranchRecord& rec = result.per_branch[k];
        rec.alice = AliceOutcome::from_index(k);
        rec.probability = alice.outcomes[k].probability;
        if (!alice.outcomes[k].collapsed) continue;  // unreachable branch

        const BobStageResult bob =
            bob_stage(*alice.outcomes[k].collapsed, rec.alice, schedule, p);
        rec.success_given_branch = bob.success_probability;
        rec.success_joint = rec.probability * bob.success_probability;
        for (const BobPath& path : bob.paths)
            if (path.outcome.success()) {
                rec.fidelity = path.fidelity;
                rec.residual_phase = path.residual_phase;
            }
        result.total_success += rec.success_joint;
    }
    return result;
}

ProtocolResult run_sampled(const ProtocolParams& params, std::uint64_t shots,
                           RngSeed seed, int mode_dim, unsigned threads, double phi) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    const ProtocolParams p = validate_params(params);

    ProtocolResult result = run_enumerate(p, mode_dim, phi);
    result.mode = RunMode::sampled;
    result.shots = shots;

    // Cache the exact outcome distributions once; every shot then draws
    // through the same pipeline with its own stream.
    const StateVector entangled = alice_stage(prepare_initial(p, mode_dim));
    const PulseSchedule schedule = pulse_times(p, phi);
    const MeasurementDistribution alice =
        measure_qubits(entangled, std::span<const int>(kAliceIons));

    std::vector<double> alice_probs(16, 0.0);
    std::vector<std::vector<double>> phonon1(16), phonon2(16);
    for (std::size_t k = 0; k < 16; ++k) {
        alice_probs[k] = alice.outcomes[k].probability;
        if (!alice.outcomes[k].collapsed) continue;
        const StateVector pulsed1 = apply_local(
            ops::sideband_unitary({schedule.gt1, schedule.phi, mode_dim}, 6),
            *alice.outcomes[k].collapsed);
        const MeasurementDistribution first = measure_phonon(pulsed1);
        for (const MeasuredOutcome& o : first.outcomes)
            phonon1[k].push_back(o.probability > kNegligibleProb ? o.probability : 0.0);
        if (!(first.outcomes[0].probability > kNegligibleProb)) continue;
        const StateVector pulsed2 = apply_local(
            ops::sideband_unitary({schedule.gt2, schedule.phi, mode_dim}, 4),
            *first.outcomes[0].collapsed);
        for (const MeasuredOutcome& o : measure_phonon(pulsed2).outcomes)
            phonon2[k].push_back(o.probability > kNegligibleProb ? o.probability : 0.0);
    }

    struct Tally {
        std::array<std::uint64_t, 16> hits{};
        std::array<std::uint64_t, 16> successes{};
    };
    const auto run_range = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            RandomStream rng({seed.seed, seed.stream + shot});
            const std::size_t branch = sample_index(alice_probs, rng);
            ++tally.hits[branch];
            if (sample_index(phonon1[branch], rng) != 0) continue;
            if (sample_index(phonon2[branch], rng) != 0) continue;
            ++tally.successes[branch];
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), shots));
    std::vector<Tally> tallies(workers);
    if (workers == 1) {
        run_range(0, shots, tallies[0]);
    } else {
        const std::uint64_t chunk = (shots + workers - 1) / workers;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run_range, w * chunk,
                              std::min<std::uint64_t>(shots, (w + 1) * chunk),
                              std::ref(tallies[w]));
        for (std::thread& t : pool) t.join();
    }

    for (const Tally& tally : tallies)
        for (std::size_t k = 0; k < 16; ++k) {
            result.per_branch[k].sampled_hits += tally.hits[k];
            result.per_branch[k].sampled_successes += tally.successes[k];
            result.success_count += tally.successes[k];
        }
    result.empirical_success =
        static_cast<double>(result.success_count) / static_cast<double>(shots);
    return result;
}

ProtocolParams random_params(RandomStream& rng) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    ProtocolParams p;

    std::array<Cx, 4> payload;
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (Cx& z : payload) {
            z = Cx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
            norm2 += std::norm(z);
        }
    } while (norm2 < 1e-2);
    const double scale = 1.0 / std::sqrt(norm2);
    p.alpha = payload[0] * scale;
    p.beta = payload[1] * scale;
    p.gamma = payload[2] * scale;
    p.delta = payload[3] * scale;

    const double b2 = 0.5 * (1.0 - rng.uniform());  // (0, 0.5]
    const double d2 = 0.5 * (1.0 - rng.uniform());
    p.a = std::polar(std::sqrt(1.0 - b2), two_pi * rng.uniform());
    p.b = std::polar(std::sqrt(b2), two_pi * rng.uniform());
    p.c = std::polar(std::sqrt(1.0 - d2), two_pi * rng.uniform());
    p.d = std::polar(std::sqrt(d2), two_pi * rng.uniform());
    return p;
}

}  // namespace iontele
