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

#ifndef AZNE_DENSITY_MATRIX_HPP
#define AZNE_DENSITY_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "azne/circuit.hpp"

namespace azne {

/// Dense density matrix over n qubits, row-major. Basis index bit q holds qubit q.
class DensityMatrix {
   public:
    static constexpr std::size_t max_qubits = 12;

    /// |0...0><0...0|.
    explicit DensityMatrix(std::size_t num_qubits) : n_(num_qubits), dim_(std::size_t{1} << num_qubits) {
        if (num_qubits == 0 || num_qubits > max_qubits) {
            throw std::invalid_argument("density matrix supports 1.." + std::to_string(max_qubits) + " qubits");
        }
        data_.assign(dim_ * dim_, Complex{0, 0});
        data_[0] = 1;
    }

    static DensityMatrix from_pure(std::span<const Complex> amplitudes) {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < amplitudes.size()) ++n;
        if ((std::size_t{1} << n) != amplitudes.size()) {
            throw std::invalid_argument("statevector length is not a power of two");
        }
        DensityMatrix rho(n);
        for (std::size_t r = 0; r < rho.dim_; ++r) {
            for (std::size_t c = 0; c < rho.dim_; ++c) {
                rho.data_[r * rho.dim_ + c] = amplitudes[r] * std::conj(amplitudes[c]);
            }
        }
        return rho;
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t dim() const { return dim_; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const Complex> data() const { return data_; }

    double trace() const {
        double t = 0;
        for (std::size_t k = 0; k < dim_; ++k) t += data_[k * dim_ + k].real();
        return t;
    }

    /// max |rho - rho^dagger|.
    double hermiticity_error() const {
        double e = 0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = r; c < dim_; ++c) {
                e = std::max(e, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
            }
        }
        return e;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(dim_);
        for (std::size_t k = 0; k < dim_; ++k) d[k] = data_[k * dim_ + k].real();
        return d;
    }

    /// rho -> U rho U^dagger on qubit q.
    void apply_unitary(const Matrix2 &u, std::uint32_t q) {
        check_qubit(q);
        const std::size_t m = std::size_t{1} << q;
        if (u[1] == 0.0 && u[2] == 0.0) {
            const Complex d[2] = {u[0], u[3]};
            for (std::size_t r = 0; r < dim_; ++r) {
                const Complex dr = d[(r >> q) & 1];
                Complex *row = &data_[r * dim_];
                for (std::size_t c = 0; c < dim_; ++c) {
                    row[c] *= dr * std::conj(d[(c >> q) & 1]);
                }
            }
            return;
        }
        if (u[0] == 0.0 && u[3] == 0.0) {
            // Rows: new r0 = u01 * r1, new r1 = u10 * r0.
            for (std::size_t r0 = 0; r0 < dim_; ++r0) {
                if (r0 & m) continue;
                Complex *a = &data_[r0 * dim_];
                Complex *b = &data_[(r0 | m) * dim_];
                for (std::size_t c = 0; c < dim_; ++c) {
                    Complex t = a[c];
                    a[c] = u[1] * b[c];
                    b[c] = u[2] * t;
                }
            }
            const Complex x01 = std::conj(u[1]), x10 = std::conj(u[2]);
            for (std::size_t r = 0; r < dim_; ++r) {
                Complex *row = &data_[r * dim_];
                for (std::size_t c0 = 0; c0 < dim_; ++c0) {
                    if (c0 & m) continue;
                    Complex t = row[c0];
                    row[c0] = row[c0 | m] * x01;
                    row[c0 | m] = t * x10;
                }
            }
            return;
        }
        for (std::size_t r0 = 0; r0 < dim_; ++r0) {
            if (r0 & m) continue;
            Complex *a = &data_[r0 * dim_];
            Complex *b = &data_[(r0 | m) * dim_];
            for (std::size_t c = 0; c < dim_; ++c) {
                Complex x = a[c], y = b[c];
                a[c] = u[0] * x + u[1] * y;
                b[c] = u[2] * x + u[3] * y;
            }
        }
        const Complex v00 = std::conj(u[0]), v01 = std::conj(u[1]), v10 = std::conj(u[2]), v11 = std::conj(u[3]);
        for (std::size_t r = 0; r < dim_; ++r) {
            Complex *row = &data_[r * dim_];
            for (std::size_t c0 = 0; c0 < dim_; ++c0) {
                if (c0 & m) continue;
                Complex x = row[c0], y = row[c0 | m];
                row[c0] = x * v00 + y * v01;
                row[c0 | m] = x * v10 + y * v11;
            }
        }
    }

    void apply_cnot(std::uint32_t control, std::uint32_t target) {
        check_qubit(control);
        check_qubit(target);
        const std::size_t cm = std::size_t{1} << control, tm = std::size_t{1} << target;
        for (std::size_t r = 0; r < dim_; ++r) {
            if ((r & cm) && !(r & tm)) {
                std::swap_ranges(
                    data_.begin() + static_cast<std::ptrdiff_t>(r * dim_),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim_),
                    data_.begin() + static_cast<std::ptrdiff_t>((r | tm) * dim_));
            }
        }
        for (std::size_t r = 0; r < dim_; ++r) {
            Complex *row = &data_[r * dim_];
            for (std::size_t c = 0; c < dim_; ++c) {
                if ((c & cm) && !(c & tm)) std::swap(row[c], row[c | tm]);
            }
        }
    }

    /// Two-qubit depolarizing: rho -> (1-p) rho + p (I/4 (x) Tr_{a,b} rho).
    void depolarize_pair(std::uint32_t a, std::uint32_t b, double p) {
        check_qubit(a);
        check_qubit(b);
        check_probability(p);
        if (p == 0) return;
        const std::size_t am = std::size_t{1} << a, bm = std::size_t{1} << b;
        const std::size_t sub[4] = {0, am, bm, am | bm};
        const double keep = 1 - p;
        for (std::size_t r = 0; r < dim_; ++r) {
            if (r & (am | bm)) continue;
            for (std::size_t c = 0; c < dim_; ++c) {
                if (c & (am | bm)) continue;
                Complex t = 0;
                for (std::size_t k : sub) t += (*this)(r | k, c | k);
                for (std::size_t k : sub) {
                    for (std::size_t l : sub) (*this)(r | k, c | l) *= keep;
                    (*this)(r | k, c | k) += p * t / 4.0;
                }
            }
        }
    }

    /// Single-qubit depolarizing: rho -> (1-p) rho + p (I/2 (x) Tr_q rho).
    void depolarize_qubit(std::uint32_t q, double p) {
        check_qubit(q);
        check_probability(p);
        if (p == 0) return;
        const std::size_t m = std::size_t{1} << q;
        const double keep = 1 - p;
        for (std::size_t r = 0; r < dim_; ++r) {
            if (r & m) continue;
            for (std::size_t c = 0; c < dim_; ++c) {
                if (c & m) continue;
                Complex t = (*this)(r, c) + (*this)(r | m, c | m);
                (*this)(r, c) = keep * (*this)(r, c) + p * t / 2.0;
                (*this)(r | m, c | m) = keep * (*this)(r | m, c | m) + p * t / 2.0;
                (*this)(r | m, c) *= keep;
                (*this)(r, c | m) *= keep;
            }
        }
    }

    void apply_gate(const Gate &g) {
        if (g.is_cnot()) {
            apply_cnot(g.control(), g.target());
        } else {
            apply_unitary(g.matrix(), g.qubits[0]);
        }
    }

   private:
    void check_qubit(std::uint32_t q) const {
        if (q >= n_) throw std::invalid_argument("qubit index out of range");
    }
    static void check_probability(double p) {
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("channel strength outside [0, 1]");
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<Complex> data_;
};

}  // namespace azne

#endif
