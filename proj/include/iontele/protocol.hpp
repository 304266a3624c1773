// End-to-end pipeline for teleporting an arbitrary two-ion state through two
// partially entangled ion pairs: parameter validation, joint-state
// preparation, the sender's entangling stage, the receiver's pulse/filter/
// correct stage for every measurement branch, exact enumeration, seeded
// Monte Carlo runs, and the closed-form success probability 4|bd|^2.
#pragma once

#include "iontele/hilbert.hpp"
#include "iontele/measure.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace iontele {

struct OrderingViolated : SimError { using SimError::SimError; };
struct NonFinite : SimError { using SimError::SimError; };
struct UnknownOutcome : SimError { using SimError::SimError; };
struct PhononLeakage : SimError { using SimError::SimError; };

// Tolerance on the normalization and ordering constraints below.
inline constexpr double kParamTol = 1e-10;

// Amplitudes of the payload state on ions (1,2) and of the two channel
// pairs. Channel phases enter the corrections as the arguments of a..d.
struct ProtocolParams {
    Cx alpha{1.0}, beta{}, gamma{}, delta{};  // payload on |ee>,|eg>,|ge>,|gg>
    Cx a{1.0}, b{};                           // ions (3,4): a|ee> + b|gg>, |a| >= |b|
    Cx c{1.0}, d{};                           // ions (5,6): c|ee> + d|gg>, |c| >= |d|

    double theta1() const { return std::arg(a); }
    double theta2() const { return std::arg(b); }
    double theta3() const { return std::arg(c); }
    double theta4() const { return std::arg(d); }
};

// Checks |alpha|^2+..+|delta|^2 = 1, |a|^2+|b|^2 = 1 with |a| >= |b|,
// |c|^2+|d|^2 = 1 with |c| >= |d|, all within kParamTol. Inputs are never
// renormalized silently.
ProtocolParams validate_params(const ProtocolParams& raw);

// Dimensionless pulse areas for the receiver's two filter pulses.
struct PulseSchedule {
    double gt1 = 0.0;  // arccos |d/c|, ion 6
    double gt2 = 0.0;  // arccos |b/a|, ion 4
    double phi = 0.0;  // laser phase
};

// gt1 = arccos(|d|/|c|), gt2 = arccos(|b|/|a|); ratios are clamped to <= 1
// so maximally entangled channels give exactly zero pulse area.
PulseSchedule pulse_times(const ProtocolParams& params, double phi = 0.0);

// Result of the sender's four-qubit measurement, ions (1,3) and (2,5).
// 0 = e, 1 = g.
struct AliceOutcome {
    int ion1 = 0;
    int ion3 = 0;
    int ion2 = 0;
    int ion5 = 0;

    static AliceOutcome from_index(std::size_t k);  // bits (1,3,2,5), ion 1 high
    std::size_t index() const;
    std::string label_13() const;  // "ee", "eg", "ge", "gg"
    std::string label_25() const;
    std::string label() const;  // "ee,ee"
};

// Joint record of one run down a branch: the sender's bits plus the
// receiver's phonon readouts. The second readout only happens after a 0.
struct BranchOutcome {
    AliceOutcome alice;
    int phonon_1 = 0;
    std::optional<int> phonon_2;

    bool success() const { return phonon_1 == 0 && phonon_2 && *phonon_2 == 0; }
};

// State vector layout used by the pipeline: ions 1..6 plus the mode.
RegisterLayout protocol_layout(int mode_dim);

// Joint state (payload on 1,2) x (channel 3,4) x (channel 5,6) x |0>_mode.
StateVector prepare_initial(const ProtocolParams& params, int mode_dim);

// C-NOT(1->3), C-NOT(2->5), H(1), H(2), in that order.
StateVector alice_stage(const StateVector& state);

// Recovery sequence on ions (4,6) for one measurement branch: the collective
// phase (theta4-theta3, theta2-theta1) first, then X flips conditioned on
// the ion-3/ion-5 bits, then Z sign fixes conditioned on the ion-1/ion-2
// bits. Applying it to the post-filter branch state restores the payload
// exactly, up to a global phase e^{i(theta1+theta3)}.
std::vector<Operator> correction_for(const AliceOutcome& outcome,
                                     const ProtocolParams& params);

struct BobPath {
    BranchOutcome outcome;
    double probability = 0.0;           // conditional on the branch
    std::optional<StateVector> output;  // corrected state, success path only
    std::optional<double> fidelity;     // vs. the payload target, success only
    std::optional<Cx> residual_phase;   // <target|output>, unit modulus
};

struct BobStageResult {
    std::vector<BobPath> paths;
    double success_probability = 0.0;  // conditional on the branch
};

// Pulse on ion 6, phonon readout, pulse on ion 4, phonon readout, branch
// correction. branch_state must be the normalized collapsed state for the
// given outcome with the mode in |0>.
BobStageResult bob_stage(const StateVector& branch_state, const AliceOutcome& outcome,
                         const PulseSchedule& schedule, const ProtocolParams& params);

enum class RunMode { enumerate, sampled };

struct BranchRecord {
    AliceOutcome alice;
    double probability = 0.0;           // P(this sender outcome)
    double success_given_branch = 0.0;  // P(both phonons 0 | branch)
    double success_joint = 0.0;         // product of the two
    std::optional<double> fidelity;     // output fidelity on the success path
    std::optional<Cx> residual_phase;
    std::uint64_t sampled_hits = 0;      // sampled mode only
    std::uint64_t sampled_successes = 0;
};

struct ProtocolResult {
    RunMode mode = RunMode::enumerate;
    int mode_dim = 4;
    std::vector<BranchRecord> per_branch;  // all 16, fixed order
    double total_success = 0.0;            // exact, from the enumeration walk
    double analytic_success = 0.0;         // 4 |b d|^2
    std::uint64_t shots = 0;               // sampled mode only
    std::uint64_t success_count = 0;
    double empirical_success = 0.0;
};

// Exact tree walk over all 16 sender branches and all phonon paths. The
// laser phase only shows up on discarded branches; it defaults to 0.
ProtocolResult run_enumerate(const ProtocolParams& params, int mode_dim = 4,
                             double phi = 0.0);

// Seeded Monte Carlo over the same pipeline; shot k draws from the stream
// (seed.seed, seed.stream + k), so aggregate counts are bitwise identical
// for any worker count.
ProtocolResult run_sampled(const ProtocolParams& params, std::uint64_t shots,
                           RngSeed seed, int mode_dim = 4, unsigned threads = 1,
                           double phi = 0.0);

// 4 |b|^2 |d|^2.
double analytic_success(const ProtocolParams& params);

// Random valid parameter set: payload amplitudes uniform in the complex
// square then normalized, |b|^2 and |d|^2 uniform in (0, 0.5], channel
// phases uniform in [0, 2 pi).
ProtocolParams random_params(RandomStream& rng);

}  // namespace iontele
