// Copyright 2026 The sqsig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense state-vector simulation of registers of at most four qubits.
//
// Qubit 0 is the most significant bit of a basis index, so the amplitude
// vector of tensor(a, b) is the Kronecker product a (x) b.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sqs/error.hpp"
#include "sqs/rng.hpp"
#include "sqs/tolerance.hpp"

namespace sqs {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 4;
inline constexpr std::size_t kMaxDim = std::size_t{1} << kMaxQubits;

enum class Basis : std::uint8_t { Z = 0, X = 1 };

enum class QubitRole : std::uint8_t { TrentHalf, BobHalf, Decoy, EveAncilla };

inline const char *to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

inline const char *to_string(QubitRole r) {
    switch (r) {
        case QubitRole::TrentHalf: return "TrentHalf";
        case QubitRole::BobHalf: return "BobHalf";
        case QubitRole::Decoy: return "Decoy";
        case QubitRole::EveAncilla: return "EveAncilla";
    }
    return "?";
}

/// Square complex matrix, row-major. Used for gates and density matrices.
class Operator {
public:
    Operator() = default;
    explicit Operator(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}
    Operator(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
        if (data_.size() != dim * dim) {
            fail(ErrorCode::DimensionMismatch, "operator of dim " + std::to_string(dim) + " needs " +
                                                   std::to_string(dim * dim) + " entries");
        }
    }

    static Operator identity(std::size_t dim) {
        Operator m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const Complex> entries() const { return data_; }

    Operator dagger() const {
        Operator out(dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    friend Operator operator*(const Operator &a, const Operator &b) {
        if (a.dim_ != b.dim_) fail(ErrorCode::DimensionMismatch, "operator product");
        Operator out(a.dim_);
        for (std::size_t r = 0; r < a.dim_; ++r)
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const Complex v = a(r, k);
                if (v == Complex{}) continue;
                for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += v * b(k, c);
            }
        return out;
    }

    friend Operator operator-(const Operator &a, const Operator &b) {
        if (a.dim_ != b.dim_) fail(ErrorCode::DimensionMismatch, "operator difference");
        Operator out(a.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
        return out;
    }

    /// Largest entrywise modulus of (a - b).
    friend double max_abs_diff(const Operator &a, const Operator &b) {
        if (a.dim_ != b.dim_) fail(ErrorCode::DimensionMismatch, "operator comparison");
        double m = 0.0;
        for (std::size_t i = 0; i < a.data_.size(); ++i) m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
        return m;
    }

    bool is_unitary(double tol = Tolerance::unitary) const {
        return max_abs_diff(dagger() * *this, identity(dim_)) <= tol;
    }

    bool is_hermitian(double tol = Tolerance::hermitian) const { return max_abs_diff(*this, dagger()) <= tol; }

    Complex trace() const {
        Complex t{};
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

inline Operator kron(const Operator &a, const Operator &b) {
    Operator out(a.dim() * b.dim());
    for (std::size_t ar = 0; ar < a.dim(); ++ar)
        for (std::size_t ac = 0; ac < a.dim(); ++ac)
            for (std::size_t br = 0; br < b.dim(); ++br)
                for (std::size_t bc = 0; bc < b.dim(); ++bc)
                    out(ar * b.dim() + br, ac * b.dim() + bc) = a(ar, ac) * b(br, bc);
    return out;
}

namespace gates {

inline const Operator &I() {
    static const Operator m = Operator::identity(2);
    return m;
}
inline const Operator &X() {
    static const Operator m(2, {0.0, 1.0, 1.0, 0.0});
    return m;
}
inline const Operator &Y() {
    static const Operator m(2, {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0});
    return m;
}
inline const Operator &Z() {
    static const Operator m(2, {1.0, 0.0, 0.0, -1.0});
    return m;
}
inline const Operator &H() {
    static const double s = 1.0 / std::numbers::sqrt2;
    static const Operator m(2, {s, s, s, -s});
    return m;
}
/// Control is the first target, target the second.
inline const Operator &CNOT() {
    static const Operator m(4, {1, 0, 0, 0,  //
                                0, 1, 0, 0,  //
                                0, 0, 0, 1,  //
                                0, 0, 1, 0});
    return m;
}

}  // namespace gates

/// Normalized amplitudes over 1..4 labeled qubits, stored inline.
class StateVector {
public:
    StateVector(std::span<const Complex> amplitudes, std::span<const QubitRole> labels) {
        const std::size_t n = labels.size();
        if (n == 0 || n > kMaxQubits) {
            fail(ErrorCode::RegisterCapExceeded, "register of " + std::to_string(n) + " qubits (allowed 1.." +
                                                     std::to_string(kMaxQubits) + ")");
        }
        if (amplitudes.size() != (std::size_t{1} << n)) {
            fail(ErrorCode::DimensionMismatch, std::to_string(amplitudes.size()) + " amplitudes for " +
                                                   std::to_string(n) + " qubits");
        }
        num_qubits_ = static_cast<std::uint8_t>(n);
        std::copy(amplitudes.begin(), amplitudes.end(), amps_.begin());
        std::copy(labels.begin(), labels.end(), labels_.begin());
        const double norm = norm2();
        if (std::abs(norm - 1.0) > Tolerance::norm) {
            fail(ErrorCode::InvalidArgument, "state is not normalized (norm^2 = " + std::to_string(norm) + ")");
        }
    }

    StateVector(std::initializer_list<Complex> amplitudes, std::initializer_list<QubitRole> labels)
        : StateVector(std::span<const Complex>(amplitudes.begin(), amplitudes.size()),
                      std::span<const QubitRole>(labels.begin(), labels.size())) {}

    /// Computational basis state |index> over `labels`.
    static StateVector basis_state(std::size_t index, std::span<const QubitRole> labels) {
        std::array<Complex, kMaxDim> a{};
        const std::size_t dim = std::size_t{1} << labels.size();
        if (index >= dim) fail(ErrorCode::InvalidArgument, "basis index out of range");
        a[index] = 1.0;
        return StateVector(std::span<const Complex>(a.data(), dim), labels);
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return std::size_t{1} << num_qubits_; }
    std::span<const Complex> amplitudes() const { return {amps_.data(), dim()}; }
    std::span<const QubitRole> labels() const { return {labels_.data(), num_qubits_}; }
    Complex amplitude(std::size_t i) const { return amps_[i]; }
    QubitRole label(std::size_t q) const { return labels_[q]; }

    double norm2() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) s += std::norm(amps_[i]);
        return s;
    }

    /// Bit mask of qubit q inside a basis index.
    std::size_t mask(std::size_t q) const { return std::size_t{1} << (num_qubits_ - 1 - q); }

private:
    StateVector() = default;

    std::uint8_t num_qubits_ = 0;
    std::array<Complex, kMaxDim> amps_{};
    std::array<QubitRole, kMaxQubits> labels_{};

    friend StateVector detail_unchecked(std::span<const Complex>, std::span<const QubitRole>);
};

/// Builds a state without the normalization check; callers renormalize first.
inline StateVector detail_unchecked(std::span<const Complex> amplitudes, std::span<const QubitRole> labels) {
    StateVector s;
    s.num_qubits_ = static_cast<std::uint8_t>(labels.size());
    std::copy(amplitudes.begin(), amplitudes.end(), s.amps_.begin());
    std::copy(labels.begin(), labels.end(), s.labels_.begin());
    return s;
}

namespace detail {

inline StateVector renormalized(std::array<Complex, kMaxDim> amps, const StateVector &like) {
    const std::size_t dim = like.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += std::norm(amps[i]);
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t i = 0; i < dim; ++i) amps[i] *= inv;
    return detail_unchecked(std::span<const Complex>(amps.data(), dim), like.labels());
}

}  // namespace detail

/// |0>, |1>, |+>, |->.
inline StateVector prepare_single(Basis basis, std::uint8_t bit, QubitRole role = QubitRole::Decoy) {
    const std::array<QubitRole, 1> labels{role};
    const double s = 1.0 / std::numbers::sqrt2;
    std::array<Complex, 2> a{};
    if (basis == Basis::Z) {
        a[bit & 1U] = 1.0;
    } else {
        a = {s, bit ? -s : s};
    }
    return StateVector(a, labels);
}

/// |Phi+> for g = 0 and |Psi+> for g = 1, labeled [TrentHalf, BobHalf].
inline StateVector prepare_bell(std::uint8_t g_bit) {
    const std::array<QubitRole, 2> labels{QubitRole::TrentHalf, QubitRole::BobHalf};
    const double s = 1.0 / std::numbers::sqrt2;
    std::array<Complex, 4> a{};
    if (g_bit == 0) {
        a[0b00] = s;
        a[0b11] = s;
    } else {
        a[0b01] = s;
        a[0b10] = s;
    }
    return StateVector(a, labels);
}

inline StateVector tensor(std::span<const StateVector> states) {
    if (states.empty()) fail(ErrorCode::InvalidArgument, "tensor of an empty list");
    std::size_t total = 0;
    for (const auto &s : states) total += s.num_qubits();
    if (total > kMaxQubits) {
        fail(ErrorCode::RegisterCapExceeded, "tensor would hold " + std::to_string(total) + " qubits");
    }
    std::array<Complex, kMaxDim> acc{};
    std::array<QubitRole, kMaxQubits> labels{};
    acc[0] = 1.0;
    std::size_t dim = 1;
    std::size_t nq = 0;
    for (const auto &s : states) {
        std::array<Complex, kMaxDim> next{};
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < s.dim(); ++j) next[i * s.dim() + j] = acc[i] * s.amplitude(j);
        acc = next;
        dim *= s.dim();
        for (auto l : s.labels()) labels[nq++] = l;
    }
    return detail::renormalized(acc, detail_unchecked(std::span<const Complex>(acc.data(), dim),
                                                      std::span<const QubitRole>(labels.data(), nq)));
}

inline StateVector tensor(std::initializer_list<StateVector> states) {
    return tensor(std::span<const StateVector>(states.begin(), states.size()));
}

namespace detail {

/// Same as apply_unitary, for operators already known to be unitary.
inline StateVector apply_known_unitary(const StateVector &state, const Operator &u,
                                       std::span<const std::size_t> targets) {
    const std::size_t k = targets.size();
    std::size_t target_mask = 0;
    std::array<std::size_t, kMaxQubits> masks{};
    for (std::size_t i = 0; i < k; ++i) {
        masks[i] = state.mask(targets[i]);
        target_mask |= masks[i];
    }
    const std::size_t sub = u.dim();
    std::array<Complex, kMaxDim> out{};
    std::array<std::size_t, kMaxDim> idx{};
    std::array<Complex, kMaxDim> in{};
    for (std::size_t base = 0; base < state.dim(); ++base) {
        if (base & target_mask) continue;
        for (std::size_t s = 0; s < sub; ++s) {
            std::size_t i = base;
            for (std::size_t t = 0; t < k; ++t)
                if (s & (std::size_t{1} << (k - 1 - t))) i |= masks[t];
            idx[s] = i;
            in[s] = state.amplitude(i);
        }
        for (std::size_t r = 0; r < sub; ++r) {
            Complex acc{};
            for (std::size_t c = 0; c < sub; ++c) acc += u(r, c) * in[c];
            out[idx[r]] = acc;
        }
    }
    return renormalized(out, state);
}

inline StateVector apply_known_unitary(const StateVector &state, const Operator &u, std::size_t target) {
    const std::array<std::size_t, 1> t{target};
    return apply_known_unitary(state, u, t);
}

}  // namespace detail

/// Applies `u` to `targets` (targets[0] is the most significant sub-index bit).
inline StateVector apply_unitary(const StateVector &state, const Operator &u, std::span<const std::size_t> targets) {
    const std::size_t k = targets.size();
    if (k == 0 || u.dim() != (std::size_t{1} << k)) {
        fail(ErrorCode::DimensionMismatch, "operator of dim " + std::to_string(u.dim()) + " on " +
                                               std::to_string(k) + " targets");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (targets[i] >= state.num_qubits()) {
            fail(ErrorCode::InvalidArgument, "target qubit " + std::to_string(targets[i]) + " out of range");
        }
        for (std::size_t j = i + 1; j < k; ++j)
            if (targets[i] == targets[j]) fail(ErrorCode::InvalidArgument, "targets must be distinct");
    }
    if (!u.is_unitary()) fail(ErrorCode::NonUnitary, "matrix is not unitary within tolerance");
    return detail::apply_known_unitary(state, u, targets);
}

inline StateVector apply_unitary(const StateVector &state, const Operator &u, std::initializer_list<std::size_t> targets) {
    return apply_unitary(state, u, std::span<const std::size_t>(targets.begin(), targets.size()));
}

/// Probability that measuring `qubit` in `basis` yields `bit`.
inline double outcome_probability(const StateVector &state, std::size_t qubit, Basis basis, std::uint8_t bit) {
    if (qubit >= state.num_qubits()) fail(ErrorCode::InvalidArgument, "qubit index out of range");
    const StateVector rotated = basis == Basis::X ? detail::apply_known_unitary(state, gates::H(), qubit) : state;
    const std::size_t m = rotated.mask(qubit);
    double p = 0.0;
    for (std::size_t i = 0; i < rotated.dim(); ++i)
        if (((i & m) != 0) == (bit != 0)) p += std::norm(rotated.amplitude(i));
    return p;
}

struct MeasurementOutcome {
    std::uint8_t bit;
    Basis basis;
    StateVector post_state;
};

/// Projective measurement with Born-rule sampling and collapse.
inline MeasurementOutcome measure(const StateVector &state, std::size_t qubit, Basis basis, Rng &rng) {
    if (qubit >= state.num_qubits()) fail(ErrorCode::InvalidArgument, "qubit index out of range");
    const StateVector rotated = basis == Basis::X ? detail::apply_known_unitary(state, gates::H(), qubit) : state;
    const std::size_t m = rotated.mask(qubit);
    double p1 = 0.0;
    for (std::size_t i = 0; i < rotated.dim(); ++i)
        if (i & m) p1 += std::norm(rotated.amplitude(i));
    const std::uint8_t bit = rng.uniform() < p1 ? 1 : 0;
    std::array<Complex, kMaxDim> kept{};
    for (std::size_t i = 0; i < rotated.dim(); ++i)
        if (((i & m) != 0) == (bit != 0)) kept[i] = rotated.amplitude(i);
    StateVector collapsed = detail::renormalized(kept, rotated);
    if (basis == Basis::X) collapsed = detail::apply_known_unitary(collapsed, gates::H(), qubit);
    return {bit, basis, collapsed};
}

/// |<a|b>|^2.
inline double fidelity(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "fidelity of registers of different size");
    Complex ip{};
    for (std::size_t i = 0; i < a.dim(); ++i) ip += std::conj(a.amplitude(i)) * b.amplitude(i);
    return std::norm(ip);
}

inline bool equal_up_to_phase(const StateVector &a, const StateVector &b) {
    return a.dim() == b.dim() && fidelity(a, b) >= 1.0 - Tolerance::fidelity;
}

namespace detail {

inline Eigen::VectorXd hermitian_eigenvalues(const Operator &m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim()));
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace detail

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(Operator entries) : m_(std::move(entries)) {
        const std::size_t d = m_.dim();
        if (d == 0 || (d & (d - 1)) != 0) fail(ErrorCode::DimensionMismatch, "density matrix dim must be a power of 2");
        if (!m_.is_hermitian()) fail(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
        if (std::abs(m_.trace() - Complex{1.0, 0.0}) > Tolerance::trace) {
            fail(ErrorCode::InvalidArgument, "density matrix trace is not 1");
        }
        if (detail::hermitian_eigenvalues(m_).minCoeff() < Tolerance::psd_eigenvalue) {
            fail(ErrorCode::InvalidArgument, "density matrix is not positive semidefinite");
        }
    }

    static DensityMatrix pure(const StateVector &s) {
        Operator m(s.dim());
        for (std::size_t r = 0; r < s.dim(); ++r)
            for (std::size_t c = 0; c < s.dim(); ++c) m(r, c) = s.amplitude(r) * std::conj(s.amplitude(c));
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        Operator m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
        return DensityMatrix(std::move(m));
    }

    /// Equal-weight mixture of the given pure states.
    static DensityMatrix uniform_mixture(std::span<const StateVector> states) {
        if (states.empty()) fail(ErrorCode::InvalidArgument, "mixture of no states");
        const std::size_t d = states.front().dim();
        Operator m(d);
        const double w = 1.0 / static_cast<double>(states.size());
        for (const auto &s : states) {
            if (s.dim() != d) fail(ErrorCode::DimensionMismatch, "mixture of registers of different size");
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) m(r, c) += w * s.amplitude(r) * std::conj(s.amplitude(c));
        }
        return DensityMatrix(std::move(m));
    }

    std::size_t dim() const { return m_.dim(); }
    std::size_t num_qubits() const { return static_cast<std::size_t>(std::countr_zero(m_.dim())); }
    const Complex &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    const Operator &matrix() const { return m_; }

private:
    Operator m_;
};

namespace detail {

inline std::vector<std::size_t> checked_keep(std::span<const std::size_t> keep, std::size_t num_qubits) {
    if (keep.empty()) fail(ErrorCode::InvalidArgument, "partial trace must keep at least one qubit");
    std::vector<std::size_t> k(keep.begin(), keep.end());
    std::sort(k.begin(), k.end());
    if (std::adjacent_find(k.begin(), k.end()) != k.end()) fail(ErrorCode::InvalidArgument, "duplicate kept qubit");
    if (k.back() >= num_qubits) fail(ErrorCode::InvalidArgument, "kept qubit out of range");
    return k;
}

/// Splits a full basis index into (kept sub-index, traced sub-index).
inline std::pair<std::size_t, std::size_t> split_index(std::size_t i, std::size_t num_qubits,
                                                       const std::vector<std::size_t> &keep) {
    std::size_t kept = 0;
    std::size_t traced = 0;
    for (std::size_t q = 0; q < num_qubits; ++q) {
        const std::size_t bit = (i >> (num_qubits - 1 - q)) & 1U;
        if (std::binary_search(keep.begin(), keep.end(), q)) {
            kept = (kept << 1) | bit;
        } else {
            traced = (traced << 1) | bit;
        }
    }
    return {kept, traced};
}

}  // namespace detail

/// Reduced density matrix over `keep` (kept qubits ordered ascending).
inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.num_qubits();
    const auto k = detail::checked_keep(keep, n);
    Operator out(std::size_t{1} << k.size());
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        const auto [rk, rt] = detail::split_index(r, n, k);
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            const auto [ck, ct] = detail::split_index(c, n, k);
            if (rt == ct) out(rk, ck) += rho(r, c);
        }
    }
    return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep) {
    const std::size_t n = state.num_qubits();
    const auto k = detail::checked_keep(keep, n);
    Operator out(std::size_t{1} << k.size());
    for (std::size_t r = 0; r < state.dim(); ++r) {
        const auto [rk, rt] = detail::split_index(r, n, k);
        for (std::size_t c = 0; c < state.dim(); ++c) {
            const auto [ck, ct] = detail::split_index(c, n, k);
            if (rt == ct) out(rk, ck) += state.amplitude(r) * std::conj(state.amplitude(c));
        }
    }
    return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const StateVector &state, std::initializer_list<std::size_t> keep) {
    return partial_trace(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// D(rho, sigma) = 1/2 * sum |eigenvalues(rho - sigma)|.
inline double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        fail(ErrorCode::DimensionMismatch, "trace distance between dims " + std::to_string(rho.dim()) + " and " +
                                               std::to_string(sigma.dim()));
    }
    const auto ev = detail::hermitian_eigenvalues(rho.matrix() - sigma.matrix());
    const double d = 0.5 * ev.cwiseAbs().sum();
    return std::clamp(d, 0.0, 1.0);
}

}  // namespace sqs
