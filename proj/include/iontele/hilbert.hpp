// State vectors over labeled ion qubits plus one Fock-truncated motional
// mode. States and operators are immutable values; operations are pure
// functions returning fresh states, so everything here can be shared
// read-only across threads.
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iontele {

using Cx = std::complex<double>;

// Norm / unitarity budget at dimension <= 256 in double precision.
inline constexpr double kUnitaryTol = 1e-12;
// Looser bound for "is this state normalized" preconditions.
inline constexpr double kNormalizedTol = 1e-9;

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownRegister : SimError { using SimError::SimError; };
struct IndexOutOfRange : SimError { using SimError::SimError; };
struct DimensionMismatch : SimError { using SimError::SimError; };
struct LayoutMismatch : SimError { using SimError::SimError; };
struct NotNormalized : SimError { using SimError::SimError; };
struct NotUnitary : SimError { using SimError::SimError; };

// One register: a labeled ion qubit, or the shared motional mode.
struct Reg {
    enum class Kind : unsigned char { qubit, mode };
    Kind kind = Kind::qubit;
    int label = 0;  // ion label; unused for the mode

    static constexpr Reg qubit(int label) { return Reg{Kind::qubit, label}; }
    static constexpr Reg mode() { return Reg{Kind::mode, 0}; }

    friend constexpr bool operator==(const Reg&, const Reg&) = default;
};

// Dense square complex matrix, row-major.
class CMatrix {
  public:
    explicit CMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

    static CMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }

    Cx& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
    const Cx& operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

    CMatrix dagger() const;

    friend CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs);

  private:
    std::size_t dim_;
    std::vector<Cx> a_;
};

// max_ij |(U^dag U - I)_ij|
double unitarity_defect(const CMatrix& u);

// Ordered qubit labels plus the Fock truncation of the single motional mode.
// Basis index convention: qubit levels in layout order (first label in the
// most significant position, |e> = 0, |g> = 1), mode level in the least
// significant digit.
class RegisterLayout {
  public:
    RegisterLayout(std::vector<int> qubit_labels, int mode_dim);

    std::size_t num_qubits() const { return labels_.size(); }
    int mode_dim() const { return mode_dim_; }
    std::size_t dim() const {
        return (std::size_t{1} << labels_.size()) * static_cast<std::size_t>(mode_dim_);
    }
    const std::vector<int>& qubit_labels() const { return labels_; }

    bool has_qubit(int label) const;
    std::size_t qubit_position(int label) const;  // throws UnknownRegister

    std::size_t reg_dim(Reg r) const;
    std::size_t stride(Reg r) const;

    // Index of the basis state with the given per-qubit levels (layout order)
    // and mode level.
    std::size_t basis_index(std::span<const int> qubit_levels, int mode_level) const;

    friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

  private:
    std::vector<int> labels_;
    int mode_dim_;
};

class StateVector {
  public:
    StateVector(RegisterLayout layout, std::vector<Cx> amps);

    const RegisterLayout& layout() const { return layout_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Cx> amps() const { return amps_; }
    Cx amp(std::size_t i) const { return amps_.at(i); }
    double norm_sq() const;

  private:
    RegisterLayout layout_;
    std::vector<Cx> amps_;
};

// Dense operator acting on an ordered subset of registers (first target in
// the most significant position of the matrix index).
class Operator {
  public:
    // Checked constructor for gates: rejects matrices whose unitarity defect
    // exceeds kUnitaryTol.
    static Operator unitary(std::vector<Reg> targets, CMatrix matrix);
    // Unchecked variant for non-unitary maps.
    static Operator general(std::vector<Reg> targets, CMatrix matrix);

    const std::vector<Reg>& targets() const { return targets_; }
    const CMatrix& matrix() const { return matrix_; }
    bool unitary_flagged() const { return unitary_; }
    std::size_t dim() const { return matrix_.dim(); }

  private:
    Operator(std::vector<Reg> targets, CMatrix matrix, bool unitary);

    std::vector<Reg> targets_;
    CMatrix matrix_;
    bool unitary_;
};

// Computational basis state with amplitude 1 at the assigned levels.
// qubit_levels must cover exactly the layout's labels.
StateVector new_basis_state(const RegisterLayout& layout,
                            const std::map<int, int>& qubit_levels,
                            int mode_level);

// Conjugate-linear in the first argument.
Cx inner(const StateVector& x, const StateVector& y);

// |<state|target>|^2; both arguments must be normalized within kNormalizedTol.
double fidelity_mod_phase(const StateVector& state, const StateVector& target);

// op acting on its targets, identity on every other register.
StateVector apply_local(const Operator& op, const StateVector& state);

}  // namespace iontele
