// Shared test utilities: seeded random states, random unitaries, and
// comparison helpers.
#pragma once

#include "iontele/hilbert.hpp"
#include "iontele/measure.hpp"

#include <cmath>
#include <vector>

namespace testutil {

using iontele::Cx;

inline Cx random_amp(iontele::RandomStream& rng) {
    return Cx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
}

inline iontele::StateVector random_state(const iontele::RegisterLayout& layout,
                                         iontele::RandomStream& rng) {
    std::vector<Cx> amps(layout.dim());
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (Cx& z : amps) {
            z = random_amp(rng);
            norm2 += std::norm(z);
        }
    } while (norm2 < 1e-6);
    const double scale = 1.0 / std::sqrt(norm2);
    for (Cx& z : amps) z *= scale;
    return iontele::StateVector(layout, std::move(amps));
}

// Gram-Schmidt with a second orthogonalization pass; defect stays far below
// the 1e-12 gate at the dimensions used here.
inline iontele::CMatrix random_unitary(std::size_t dim, iontele::RandomStream& rng) {
    iontele::CMatrix m(dim);
    std::vector<Cx> v(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        while (true) {
            for (Cx& z : v) z = random_amp(rng);
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t prev = 0; prev < col; ++prev) {
                    Cx overlap{};
                    for (std::size_t r = 0; r < dim; ++r)
                        overlap += std::conj(m(r, prev)) * v[r];
                    for (std::size_t r = 0; r < dim; ++r) v[r] -= overlap * m(r, prev);
                }
            double norm2 = 0.0;
            for (const Cx& z : v) norm2 += std::norm(z);
            if (norm2 > 1e-6) {
                const double scale = 1.0 / std::sqrt(norm2);
                for (std::size_t r = 0; r < dim; ++r) m(r, col) = v[r] * scale;
                break;
            }
        }
    }
    return m;
}

inline double max_amp_diff(const iontele::StateVector& x, const iontele::StateVector& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i)
        worst = std::max(worst, std::abs(x.amp(i) - y.amp(i)));
    return worst;
}

inline double max_amp_diff(const iontele::StateVector& x, const std::vector<Cx>& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i)
        worst = std::max(worst, std::abs(x.amp(i) - y[i]));
    return worst;
}

}  // namespace testutil
