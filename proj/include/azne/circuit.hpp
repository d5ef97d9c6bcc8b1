// Copyright 2026 The Adaptive ZNE Authors
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

#ifndef AZNE_CIRCUIT_HPP
#define AZNE_CIRCUIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace azne {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

inline Matrix2 matmul(const Matrix2 &a, const Matrix2 &b) {
    return {
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    };
}

inline Matrix2 adjoint(const Matrix2 &m) { return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}; }

/// Max-norm distance of U U^dagger from the identity.
inline double unitarity_error(const Matrix2 &m) {
    for (const Complex &z : m) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return INFINITY;
    }
    Matrix2 p = matmul(m, adjoint(m));
    double err = 0;
    err = std::max(err, std::abs(p[0] - 1.0));
    err = std::max(err, std::abs(p[1]));
    err = std::max(err, std::abs(p[2]));
    err = std::max(err, std::abs(p[3] - 1.0));
    return err;
}

/// Native gate set. SXDG is the adjoint of SX and only appears through inversion.
enum class GateKind : std::uint8_t { H, X, SX, SXDG, RZ, CNOT };

inline std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H:
            return "h";
        case GateKind::X:
            return "x";
        case GateKind::SX:
            return "sx";
        case GateKind::SXDG:
            return "sxdg";
        case GateKind::RZ:
            return "rz";
        case GateKind::CNOT:
            return "cnot";
    }
    return "?";
}

inline GateKind gate_kind_from_name(std::string_view name) {
    if (name == "h") return GateKind::H;
    if (name == "x") return GateKind::X;
    if (name == "sx") return GateKind::SX;
    if (name == "sxdg") return GateKind::SXDG;
    if (name == "rz") return GateKind::RZ;
    if (name == "cnot" || name == "cx") return GateKind::CNOT;
    throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

struct Gate {
    GateKind kind = GateKind::H;
    /// For CNOT: {control, target}. For single-qubit gates only qubits[0] is used.
    std::array<std::uint32_t, 2> qubits{0, 0};
    /// Rotation angle in radians (RZ only).
    double angle = 0;

    static Gate h(std::uint32_t q) { return {GateKind::H, {q, q}, 0}; }
    static Gate x(std::uint32_t q) { return {GateKind::X, {q, q}, 0}; }
    static Gate sx(std::uint32_t q) { return {GateKind::SX, {q, q}, 0}; }
    static Gate sxdg(std::uint32_t q) { return {GateKind::SXDG, {q, q}, 0}; }
    static Gate rz(std::uint32_t q, double theta) { return {GateKind::RZ, {q, q}, theta}; }
    static Gate cnot(std::uint32_t control, std::uint32_t target) { return {GateKind::CNOT, {control, target}, 0}; }

    bool is_cnot() const { return kind == GateKind::CNOT; }
    std::size_t arity() const { return is_cnot() ? 2 : 1; }
    std::uint32_t control() const { return qubits[0]; }
    std::uint32_t target() const { return qubits[1]; }

    /// 2x2 unitary of a single-qubit gate.
    Matrix2 matrix() const {
        constexpr double r = std::numbers::sqrt2 / 2;
        const Complex i{0, 1};
        switch (kind) {
            case GateKind::H:
                return {r, r, r, -r};
            case GateKind::X:
                return {0, 1, 1, 0};
            case GateKind::SX:
                return {Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5)};
            case GateKind::SXDG:
                return {Complex(0.5, -0.5), Complex(0.5, 0.5), Complex(0.5, 0.5), Complex(0.5, -0.5)};
            case GateKind::RZ:
                return {std::exp(-i * (angle / 2)), 0, 0, std::exp(i * (angle / 2))};
            case GateKind::CNOT:
                break;
        }
        throw std::invalid_argument("CNOT has no 2x2 matrix");
    }

    /// Gate implementing the adjoint.
    Gate adjoint() const {
        switch (kind) {
            case GateKind::SX:
                return sxdg(qubits[0]);
            case GateKind::SXDG:
                return sx(qubits[0]);
            case GateKind::RZ:
                return rz(qubits[0], -angle);
            default:
                return *this;
        }
    }

    bool operator==(const Gate &other) const {
        if (kind != other.kind || qubits[0] != other.qubits[0]) {
            return false;
        }
        if (is_cnot()) {
            return qubits[1] == other.qubits[1];
        }
        return kind != GateKind::RZ || angle == other.angle;
    }
};

class Circuit {
   public:
    explicit Circuit(std::size_t width, std::string label = "") : width_(width), label_(std::move(label)) {
        if (width == 0) {
            throw std::invalid_argument("circuit width must be at least 1");
        }
    }

    Circuit(std::size_t width, std::vector<Gate> gates, std::string label = "") : Circuit(width, std::move(label)) {
        for (const Gate &g : gates) {
            append(g);
        }
    }

    void append(const Gate &g) {
        if (g.qubits[0] >= width_ || (g.is_cnot() && g.qubits[1] >= width_)) {
            throw std::invalid_argument(
                "gate " + std::string(gate_name(g.kind)) + " at index " + std::to_string(gates_.size()) +
                " addresses a qubit outside width " + std::to_string(width_));
        }
        if (g.is_cnot() && g.control() == g.target()) {
            throw std::invalid_argument("CNOT control equals target at index " + std::to_string(gates_.size()));
        }
        if (g.is_cnot()) {
            ++cnot_count_;
        }
        gates_.push_back(g);
    }

    void append(const Circuit &other) {
        for (const Gate &g : other.gates()) {
            append(g);
        }
    }

    /// Physical qubit for each logical qubit; empty means identity placement.
    void set_layout(std::vector<std::uint32_t> layout) {
        if (!layout.empty() && layout.size() != width_) {
            throw std::invalid_argument("layout size must equal circuit width");
        }
        layout_ = std::move(layout);
    }

    std::size_t width() const { return width_; }
    const std::vector<Gate> &gates() const { return gates_; }
    const std::string &label() const { return label_; }
    const std::vector<std::uint32_t> &layout() const { return layout_; }
    std::uint32_t physical(std::uint32_t logical) const { return layout_.empty() ? logical : layout_[logical]; }
    std::size_t cnot_count() const { return cnot_count_; }

    bool operator==(const Circuit &other) const { return width_ == other.width_ && gates_ == other.gates_; }

   private:
    std::size_t width_;
    std::string label_;
    std::vector<Gate> gates_;
    std::vector<std::uint32_t> layout_;
    std::size_t cnot_count_ = 0;
};

inline std::size_t cnot_count(const Circuit &circuit) { return circuit.cnot_count(); }

/// Circuit implementing the adjoint: gates reversed, each replaced by its adjoint.
/// Rejects any gate whose matrix is not unitary to 1e-12 (e.g. a non-finite angle).
inline Circuit invert(const Circuit &circuit) {
    Circuit out(circuit.width(), circuit.label().empty() ? "" : circuit.label() + "_dg");
    out.set_layout(circuit.layout());
    const auto &gates = circuit.gates();
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate &g = gates[k];
        if (!g.is_cnot() && !(unitarity_error(g.matrix()) <= 1e-12)) {
            throw std::invalid_argument("gate at index " + std::to_string(k) + " is not unitary");
        }
        out.append(g.adjoint());
    }
    return out;
}

/// Bitstrings are written with character i holding qubit i.
inline std::uint64_t bitstring_to_index(std::string_view bits) {
    std::uint64_t index = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            index |= std::uint64_t{1} << q;
        } else if (bits[q] != '0') {
            throw std::invalid_argument("bitstring contains a character other than 0/1: '" + std::string(bits) + "'");
        }
    }
    return index;
}

inline std::string index_to_bitstring(std::uint64_t index, std::size_t width) {
    std::string bits(width, '0');
    for (std::size_t q = 0; q < width; ++q) {
        if ((index >> q) & 1) {
            bits[q] = '1';
        }
    }
    return bits;
}

/// Diagonal observable: either a weighted set of computational-basis projectors or the
/// |1><1| projector on one qubit.
class Observable {
   public:
    enum class Kind { bitstring_set, qubit_projector };

    static Observable bitstrings(
        std::size_t width, std::vector<std::pair<std::string, double>> terms, double ideal_value) {
        Observable o(Kind::bitstring_set, width, ideal_value);
        for (const auto &[bits, weight] : terms) {
            if (bits.size() != width) {
                throw std::invalid_argument("observable bitstring '" + bits + "' does not have length " +
                                            std::to_string(width));
            }
            if (!(weight >= 0 && weight <= 1)) {
                throw std::invalid_argument("observable weight outside [0, 1]");
            }
            bitstring_to_index(bits);
        }
        o.terms_ = std::move(terms);
        return o;
    }

    static Observable qubit_one(std::size_t width, std::uint32_t qubit, double ideal_value) {
        if (qubit >= width) {
            throw std::invalid_argument("projector qubit outside width");
        }
        Observable o(Kind::qubit_projector, width, ideal_value);
        o.qubit_ = qubit;
        return o;
    }

    Kind kind() const { return kind_; }
    std::size_t width() const { return width_; }
    double ideal_value() const { return ideal_value_; }
    std::uint32_t qubit() const { return qubit_; }
    const std::vector<std::pair<std::string, double>> &terms() const { return terms_; }

    /// Projector weight of basis state `index`.
    double weight(std::uint64_t index) const {
        if (kind_ == Kind::qubit_projector) {
            return static_cast<double>((index >> qubit_) & 1);
        }
        double w = 0;
        for (const auto &[bits, weight] : terms_) {
            if (bitstring_to_index(bits) == index) {
                w += weight;
            }
        }
        return w;
    }

    /// Dense weight vector over all 2^width basis states.
    std::vector<double> weights() const {
        std::vector<double> w(std::size_t{1} << width_, 0.0);
        if (kind_ == Kind::qubit_projector) {
            for (std::size_t k = 0; k < w.size(); ++k) {
                w[k] = static_cast<double>((k >> qubit_) & 1);
            }
        } else {
            for (const auto &[bits, weight] : terms_) {
                w[bitstring_to_index(bits)] += weight;
            }
        }
        return w;
    }

   private:
    Observable(Kind kind, std::size_t width, double ideal) : kind_(kind), width_(width), ideal_value_(ideal) {
        if (!(ideal >= 0 && ideal <= 1)) {
            throw std::invalid_argument("ideal value outside [0, 1]");
        }
    }

    Kind kind_;
    std::size_t width_;
    double ideal_value_;
    std::uint32_t qubit_ = 0;
    std::vector<std::pair<std::string, double>> terms_;
};

}  // namespace azne

#endif
