#include "iontele/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace iontele::ops {

namespace {
const Cx kMinusI{0.0, -1.0};
}

Operator hadamard(int ion) {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix m(2);
    m(0, 0) = s;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -s;
    return Operator::unitary({Reg::qubit(ion)}, std::move(m));
}

Operator cnot(int control_ion, int target_ion) {
    CMatrix m(4);
    m(0, 0) = 1.0;  // |ee> -> |ee>
    m(1, 1) = 1.0;  // |eg> -> |eg>
    m(3, 2) = 1.0;  // |ge> -> |gg>
    m(2, 3) = 1.0;  // |gg> -> |ge>
    return Operator::unitary({Reg::qubit(control_ion), Reg::qubit(target_ion)}, std::move(m));
}

Operator sideband_unitary(const PulseConfig& cfg, int ion) {
    if (!std::isfinite(cfg.gt) || cfg.gt < 0.0)
        throw std::invalid_argument("pulse area gt must be finite and >= 0");
    if (!std::isfinite(cfg.phi))
        throw std::invalid_argument("laser phase must be finite");
    if (cfg.mode_dim < 2) throw std::invalid_argument("mode_dim must be >= 2");

    const int n_max = cfg.mode_dim;
    const auto e_at = [&](int n) { return static_cast<std::size_t>(n); };
    const auto g_at = [&](int n) { return static_cast<std::size_t>(n_max + n); };

    CMatrix m(2 * static_cast<std::size_t>(n_max));
    m(g_at(0), g_at(0)) = 1.0;
    m(e_at(n_max - 1), e_at(n_max - 1)) = 1.0;  // truncation: no partner level
    for (int n = 0; n + 1 < n_max; ++n) {
        const double angle = cfg.gt * std::sqrt(static_cast<double>(n + 1));
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        m(e_at(n), e_at(n)) = c;
        m(g_at(n + 1), e_at(n)) = kMinusI * std::polar(1.0, cfg.phi) * s;
        m(g_at(n + 1), g_at(n + 1)) = c;
        m(e_at(n), g_at(n + 1)) = kMinusI * std::polar(1.0, -cfg.phi) * s;
    }
    return Operator::unitary({Reg::qubit(ion), Reg::mode()}, std::move(m));
}

Operator collective_phase(double phi1, double phi2, int ion_a, int ion_b) {
    if (!std::isfinite(phi1) || !std::isfinite(phi2))
        throw std::invalid_argument("collective phases must be finite");
    CMatrix m(4);
    m(0, 0) = 1.0;
    m(1, 1) = std::polar(1.0, -phi1);
    m(2, 2) = std::polar(1.0, -phi2);
    m(3, 3) = std::polar(1.0, -(phi1 + phi2));
    return Operator::unitary({Reg::qubit(ion_a), Reg::qubit(ion_b)}, std::move(m));
}

Operator pauli_x(int ion) {
    CMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return Operator::unitary({Reg::qubit(ion)}, std::move(m));
}

Operator pauli_z(int ion) {
    CMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return Operator::unitary({Reg::qubit(ion)}, std::move(m));
}

}  // namespace iontele::ops
