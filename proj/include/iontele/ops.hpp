// Gate constructors: Hadamard, C-NOT, the red-sideband pulse propagator,
// the two-qubit collective phase, and Pauli corrections. All constructors
// return unitarity-checked immutable Operators.
#pragma once

#include "iontele/hilbert.hpp"

namespace iontele::ops {

// A red-sideband laser pulse, parameterized by the dimensionless product of
// Rabi frequency and duration. Only the product ever enters the dynamics.
struct PulseConfig {
    double gt = 0.0;   // dimensionless pulse area, >= 0
    double phi = 0.0;  // laser phase, radians
    int mode_dim = 2;  // Fock truncation of the motional mode
};

// (1/sqrt 2) [[1, 1], [1, -1]] in the {e, g} basis.
Operator hadamard(int ion);

// Flips the target when the control is |g>. This is the convention under
// which the composed measurement stage reproduces the branch table; it is
// locked by a golden test.
Operator cnot(int control_ion, int target_ion);

// Propagator of the resonant first-lower-sideband coupling on (ion, mode):
//   |e,n>   -> cos(gt sqrt(n+1)) |e,n>   - i e^{+i phi} sin(gt sqrt(n+1)) |g,n+1>
//   |g,n+1> -> cos(gt sqrt(n+1)) |g,n+1> - i e^{-i phi} sin(gt sqrt(n+1)) |e,n>
//   |g,0>   -> |g,0>
// The top excited level |e, mode_dim-1> has no partner inside the truncated
// space and is held invariant, which keeps the matrix exactly unitary.
Operator sideband_unitary(const PulseConfig& cfg, int ion);

// Diagonal (1, e^{-i phi1}, e^{-i phi2}, e^{-i(phi1+phi2)}) over the
// {|ee>, |eg>, |ge>, |gg>} basis of (ion_a, ion_b).
Operator collective_phase(double phi1, double phi2, int ion_a, int ion_b);

Operator pauli_x(int ion);
Operator pauli_z(int ion);

}  // namespace iontele::ops
