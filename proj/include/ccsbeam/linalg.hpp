// SPDX-License-Identifier: Apache-2.0
//
// ccsbeam: convolutional compressive beam alignment for planar phased arrays
// Copyright (C) 2026 The ccsbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccsbeam
{
using cplx = std::complex<double>;

/// Thrown when operand shapes do not fit an operation.
class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major complex matrix.
class ComplexMatrix
{
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill = {});

    static ComplexMatrix square(std::size_t n, cplx fill = {}) { return ComplexMatrix(n, n, fill); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    bool operator==(const ComplexMatrix &) const = default;

    double frobenius_norm() const;
    double squared_norm() const;
    bool all_finite() const;

    ComplexMatrix conj() const;
    ComplexMatrix transpose() const;
    ComplexMatrix adjoint() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Dense row-major real matrix (masks, priors, tensors slices).
class RealMatrix
{
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    bool operator==(const RealMatrix &) const = default;

    double sum() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Matrix product A * B.
ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b);

/// Entrywise product.
ComplexMatrix hadamard(const ComplexMatrix &a, const ComplexMatrix &b);

/// Entrywise magnitude |A|.
RealMatrix abs(const ComplexMatrix &a);

/// Frobenius inner product <A, B> = sum A(k,l) conj(B(k,l)).
cplx inner(const ComplexMatrix &a, const ComplexMatrix &b);

/// Unitary DFT kernel U_N with U(k,l) = exp(-j 2 pi k l / N) / sqrt(N).
ComplexMatrix dft_kernel(std::size_t n);

/// Beamspace transform U^* A U^*.
ComplexMatrix dft2(const ComplexMatrix &a);

/// Inverse of dft2: U B U.
ComplexMatrix idft2(const ComplexMatrix &b);

/// 2D circular shift: out(k,l) = P((k-r) mod N, (l-c) mod N).
/// Offsets must already be reduced to [0, N).
ComplexMatrix circ_shift(const ComplexMatrix &p, std::size_t r, std::size_t c);

enum class XcorrAlgorithm
{
    automatic,
    direct,
    fourier
};

/// 2D circular cross-correlation
/// G(r,c) = sum_{k,l} H(k,l) conj(P((k-r) mod N, (l-c) mod N)).
ComplexMatrix circ_xcorr(const ComplexMatrix &h, const ComplexMatrix &p,
                         XcorrAlgorithm algo = XcorrAlgorithm::automatic);

/// Real 3D tensor, layout (row, col, channel), row-major with channel fastest.
class RealTensor3
{
public:
    RealTensor3(std::size_t rows, std::size_t cols, std::size_t channels)
        : rows_(rows), cols_(cols), channels_(channels), data_(rows * cols * channels, 0.0)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t channels() const noexcept { return channels_; }
    double &operator()(std::size_t r, std::size_t c, std::size_t ch) { return data_[(r * cols_ + c) * channels_ + ch]; }
    double operator()(std::size_t r, std::size_t c, std::size_t ch) const
    {
        return data_[(r * cols_ + c) * channels_ + ch];
    }

private:
    std::size_t rows_, cols_, channels_;
    std::vector<double> data_;
};

/// Stacked real-valued input of shape 2N x 4N x 2 such that a valid, stride-1
/// two-channel real correlation with the filter (P_R, P_I) yields Re(H * P) at
/// anchor (0,0) and Im(H * P) at anchor (2N,0) of the (N+1) x (3N+1) output.
/// Anchors are (column-offset-major) coordinates: (0,0) is column 0, (2N,0)
/// is column 2N, both on row 0.
RealTensor3 stack_real_tensor(const ComplexMatrix &h);

/// Filter tensor N x N x 2 holding (Re P, Im P).
RealTensor3 filter_tensor(const ComplexMatrix &p);

/// Valid-mode stride-1 multi-channel real cross-correlation; output
/// (R - r + 1) x (C - c + 1), summed across channels.
RealMatrix valid_xcorr(const RealTensor3 &input, const RealTensor3 &filter);

} // namespace ccsbeam
