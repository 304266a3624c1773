#include "iontele/measure.hpp"

#include <cmath>

namespace iontele {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Slot {
    std::size_t stride;
    std::size_t dim;
};

// Projective measurement over the registers described by slots; outcome
// index runs over the slots' digits, first slot most significant.
MeasurementDistribution project(const StateVector& state, std::span<const Slot> slots) {
    std::size_t n_out = 1;
    for (const Slot& s : slots) n_out *= s.dim;

    const auto amps = state.amps();
    std::vector<double> probs(n_out, 0.0);
    std::vector<std::size_t> outcome_of(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t o = 0;
        for (const Slot& s : slots) o = o * s.dim + (i / s.stride) % s.dim;
        outcome_of[i] = o;
        probs[o] += std::norm(amps[i]);
    }

    MeasurementDistribution dist;
    dist.outcomes.resize(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
        MeasuredOutcome& out = dist.outcomes[o];
        out.probability = probs[o];
        out.levels.resize(slots.size());
        std::size_t rem = o;
        for (std::size_t t = slots.size(); t-- > 0;) {
            out.levels[t] = static_cast<int>(rem % slots[t].dim);
            rem /= slots[t].dim;
        }
        if (probs[o] <= 0.0) continue;  // unusable collapsed marker
        const double scale = 1.0 / std::sqrt(probs[o]);
        std::vector<Cx> collapsed(amps.size(), Cx{});
        for (std::size_t i = 0; i < amps.size(); ++i)
            if (outcome_of[i] == o) collapsed[i] = amps[i] * scale;
        out.collapsed.emplace(state.layout(), std::move(collapsed));
    }
    return dist;
}

}  // namespace

double MeasurementDistribution::total_probability() const {
    double s = 0.0;
    for (const MeasuredOutcome& o : outcomes) s += o.probability;
    return s;
}

MeasurementDistribution measure_qubits(const StateVector& state,
                                       std::span<const int> target_labels) {
    const RegisterLayout& layout = state.layout();
    std::vector<Slot> slots;
    slots.reserve(target_labels.size());
    for (std::size_t i = 0; i < target_labels.size(); ++i) {
        for (std::size_t j = i + 1; j < target_labels.size(); ++j)
            if (target_labels[i] == target_labels[j])
                throw UnknownRegister("duplicate measurement target " +
                                      std::to_string(target_labels[i]));
        slots.push_back({layout.stride(Reg::qubit(target_labels[i])), 2});
    }
    if (slots.empty()) throw UnknownRegister("no measurement targets");
    return project(state, slots);
}

MeasurementDistribution measure_qubits(const StateVector& state,
                                       std::initializer_list<int> target_labels) {
    return measure_qubits(state, std::span<const int>(target_labels.begin(),
                                                      target_labels.size()));
}

MeasurementDistribution measure_phonon(const StateVector& state) {
    const Slot slot{1, static_cast<std::size_t>(state.layout().mode_dim())};
    return project(state, std::span<const Slot>(&slot, 1));
}

RandomStream::RandomStream(RngSeed s)
    : gen_(splitmix64(splitmix64(s.seed) ^ splitmix64(~s.stream))) {}

double RandomStream::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::size_t sample_index(std::span<const double> probabilities, RandomStream& rng) {
    const double u = rng.uniform();
    double cum = 0.0;
    std::size_t last_positive = probabilities.size();
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] <= 0.0) continue;
        last_positive = i;
        cum += probabilities[i];
        if (u < cum) return i;
    }
    if (last_positive == probabilities.size())
        throw SimError("cannot sample from an all-zero distribution");
    return last_positive;  // u fell into rounding slack at the top
}

std::size_t sample(const MeasurementDistribution& dist, RandomStream& rng) {
    std::vector<double> probs;
    probs.reserve(dist.outcomes.size());
    for (const MeasuredOutcome& o : dist.outcomes) probs.push_back(o.probability);
    return sample_index(probs, rng);
}

}  // namespace iontele
