#include "iontele/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace iontele {

CMatrix CMatrix::identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::dagger() const {
    CMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs) {
    if (lhs.dim() != rhs.dim())
        throw DimensionMismatch("matrix product: " + std::to_string(lhs.dim()) + " vs " +
                                std::to_string(rhs.dim()));
    CMatrix out(lhs.dim());
    for (std::size_t r = 0; r < lhs.dim(); ++r)
        for (std::size_t k = 0; k < lhs.dim(); ++k) {
            const Cx v = lhs(r, k);
            if (v == Cx{}) continue;
            for (std::size_t c = 0; c < lhs.dim(); ++c) out(r, c) += v * rhs(k, c);
        }
    return out;
}

double unitarity_defect(const CMatrix& u) {
    const CMatrix p = u.dagger() * u;
    double worst = 0.0;
    for (std::size_t r = 0; r < p.dim(); ++r)
        for (std::size_t c = 0; c < p.dim(); ++c) {
            const Cx expect = (r == c) ? Cx{1.0} : Cx{};
            worst = std::max(worst, std::abs(p(r, c) - expect));
        }
    return worst;
}

RegisterLayout::RegisterLayout(std::vector<int> qubit_labels, int mode_dim)
    : labels_(std::move(qubit_labels)), mode_dim_(mode_dim) {
    if (mode_dim_ < 2) throw std::invalid_argument("mode_dim must be >= 2");
    std::vector<int> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("qubit labels must be distinct");
    if (labels_.size() > 20) throw std::invalid_argument("too many qubits for a dense layout");
}

bool RegisterLayout::has_qubit(int label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t RegisterLayout::qubit_position(int label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw UnknownRegister("qubit " + std::to_string(label) + " not in layout");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t RegisterLayout::reg_dim(Reg r) const {
    if (r.kind == Reg::Kind::mode) return static_cast<std::size_t>(mode_dim_);
    qubit_position(r.label);  // presence check
    return 2;
}

std::size_t RegisterLayout::stride(Reg r) const {
    if (r.kind == Reg::Kind::mode) return 1;
    const std::size_t pos = qubit_position(r.label);
    return (std::size_t{1} << (labels_.size() - 1 - pos)) * static_cast<std::size_t>(mode_dim_);
}

std::size_t RegisterLayout::basis_index(std::span<const int> qubit_levels, int mode_level) const {
    if (qubit_levels.size() != labels_.size())
        throw DimensionMismatch("expected one level per qubit");
    if (mode_level < 0 || mode_level >= mode_dim_)
        throw IndexOutOfRange("mode level " + std::to_string(mode_level) + " outside [0, " +
                              std::to_string(mode_dim_) + ")");
    std::size_t idx = 0;
    for (const int lvl : qubit_levels) {
        if (lvl != 0 && lvl != 1)
            throw IndexOutOfRange("qubit level must be 0 (e) or 1 (g)");
        idx = idx * 2 + static_cast<std::size_t>(lvl);
    }
    return idx * static_cast<std::size_t>(mode_dim_) + static_cast<std::size_t>(mode_level);
}

StateVector::StateVector(RegisterLayout layout, std::vector<Cx> amps)
    : layout_(std::move(layout)), amps_(std::move(amps)) {
    if (amps_.size() != layout_.dim())
        throw DimensionMismatch("amplitude count " + std::to_string(amps_.size()) +
                                " does not match layout dimension " +
                                std::to_string(layout_.dim()));
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const Cx& z : amps_) s += std::norm(z);
    return s;
}

Operator::Operator(std::vector<Reg> targets, CMatrix matrix, bool unitary)
    : targets_(std::move(targets)), matrix_(std::move(matrix)), unitary_(unitary) {
    if (targets_.empty()) throw DimensionMismatch("operator needs at least one target");
    for (std::size_t i = 0; i < targets_.size(); ++i)
        for (std::size_t j = i + 1; j < targets_.size(); ++j)
            if (targets_[i] == targets_[j])
                throw DimensionMismatch("duplicate target register");
}

Operator Operator::unitary(std::vector<Reg> targets, CMatrix matrix) {
    const double defect = unitarity_defect(matrix);
    if (defect > kUnitaryTol)
        throw NotUnitary("unitarity defect " + std::to_string(defect));
    return Operator(std::move(targets), std::move(matrix), true);
}

Operator Operator::general(std::vector<Reg> targets, CMatrix matrix) {
    return Operator(std::move(targets), std::move(matrix), false);
}

StateVector new_basis_state(const RegisterLayout& layout,
                            const std::map<int, int>& qubit_levels,
                            int mode_level) {
    for (const auto& [label, lvl] : qubit_levels) {
        if (!layout.has_qubit(label))
            throw UnknownRegister("qubit " + std::to_string(label) + " not in layout");
        (void)lvl;
    }
    std::vector<int> levels;
    levels.reserve(layout.num_qubits());
    for (const int label : layout.qubit_labels()) {
        const auto it = qubit_levels.find(label);
        if (it == qubit_levels.end())
            throw UnknownRegister("assignment misses qubit " + std::to_string(label));
        levels.push_back(it->second);
    }
    std::vector<Cx> amps(layout.dim(), Cx{});
    amps[layout.basis_index(levels, mode_level)] = 1.0;
    return StateVector(layout, std::move(amps));
}

Cx inner(const StateVector& x, const StateVector& y) {
    if (!(x.layout() == y.layout())) throw LayoutMismatch("inner: layouts differ");
    Cx acc{};
    const auto xa = x.amps();
    const auto ya = y.amps();
    for (std::size_t i = 0; i < xa.size(); ++i) acc += std::conj(xa[i]) * ya[i];
    return acc;
}

double fidelity_mod_phase(const StateVector& state, const StateVector& target) {
    if (!(state.layout() == target.layout()))
        throw LayoutMismatch("fidelity: layouts differ");
    if (std::abs(state.norm_sq() - 1.0) > kNormalizedTol ||
        std::abs(target.norm_sq() - 1.0) > kNormalizedTol)
        throw NotNormalized("fidelity requires normalized states");
    return std::norm(inner(state, target));
}

StateVector apply_local(const Operator& op, const StateVector& state) {
    const RegisterLayout& layout = state.layout();
    const auto& targets = op.targets();

    std::vector<std::size_t> strides(targets.size());
    std::vector<std::size_t> dims(targets.size());
    std::size_t block = 1;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        strides[t] = layout.stride(targets[t]);  // throws UnknownRegister
        dims[t] = layout.reg_dim(targets[t]);
        block *= dims[t];
    }
    if (block != op.dim())
        throw DimensionMismatch("operator dimension " + std::to_string(op.dim()) +
                                " does not match target dimension " + std::to_string(block));

    // Offsets of the block sub-indices, first target most significant.
    std::vector<std::size_t> offset(block, 0);
    {
        std::vector<std::size_t> place(targets.size(), 1);
        for (std::size_t t = targets.size(); t-- > 1;) place[t - 1] = place[t] * dims[t];
        for (std::size_t k = 0; k < block; ++k) {
            std::size_t off = 0;
            for (std::size_t t = 0; t < targets.size(); ++t)
                off += ((k / place[t]) % dims[t]) * strides[t];
            offset[k] = off;
        }
    }

    const auto in = state.amps();
    std::vector<Cx> out(in.begin(), in.end());
    std::vector<Cx> sub(block);
    const CMatrix& m = op.matrix();
    for (std::size_t base = 0; base < in.size(); ++base) {
        bool anchored = true;
        for (std::size_t t = 0; t < targets.size(); ++t)
            if ((base / strides[t]) % dims[t] != 0) {
                anchored = false;
                break;
            }
        if (!anchored) continue;
        for (std::size_t k = 0; k < block; ++k) sub[k] = in[base + offset[k]];
        for (std::size_t r = 0; r < block; ++r) {
            Cx acc{};
            for (std::size_t c = 0; c < block; ++c) acc += m(r, c) * sub[c];
            out[base + offset[r]] = acc;
        }
    }
    return StateVector(layout, std::move(out));
}

}  // namespace iontele
