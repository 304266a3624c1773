// Projective measurement of qubit subsets and the motional mode, returning
// full outcome distributions with collapsed states, plus reproducible
// seeded sampling.
#pragma once

#include "iontele/hilbert.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace iontele {

// One projective outcome: measured level per target register, in target
// order. Zero-probability outcomes keep their slot but carry no collapsed
// state.
struct MeasuredOutcome {
    std::vector<int> levels;
    double probability = 0.0;
    std::optional<StateVector> collapsed;
};

struct MeasurementDistribution {
    std::vector<MeasuredOutcome> outcomes;

    double total_probability() const;
};

// One outcome per basis string of the targets, first label most significant.
MeasurementDistribution measure_qubits(const StateVector& state,
                                       std::span<const int> target_labels);
MeasurementDistribution measure_qubits(const StateVector& state,
                                       std::initializer_list<int> target_labels);

// One outcome per Fock level 0 .. mode_dim-1.
MeasurementDistribution measure_phonon(const StateVector& state);

// Identical (seed, stream) reproduces the identical draw sequence. One
// stream per Monte Carlo shot keeps concurrent sampling deterministic.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

class RandomStream {
  public:
    explicit RandomStream(RngSeed s);

    // [0, 1) with 53 significant bits, bit-stable across platforms.
    double uniform();

  private:
    std::mt19937_64 gen_;
};

// Inverse-CDF draw on a single uniform; entries <= 0 are unreachable.
std::size_t sample_index(std::span<const double> probabilities, RandomStream& rng);

// Index of the drawn outcome.
std::size_t sample(const MeasurementDistribution& dist, RandomStream& rng);

}  // namespace iontele
