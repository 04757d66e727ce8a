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

#include "ccsbeam/linalg.hpp"

#include <cmath>
#include <numbers>

namespace ccsbeam
{
namespace
{
void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(what) + ": operand shapes differ (" + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()) + ")");
}

void require_square(const ComplexMatrix &a, const char *what)
{
    if (!a.is_square() || a.empty())
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}
} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other)
{
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other)
{
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s)
{
    for (auto &v : data_)
        v *= s;
    return *this;
}

double ComplexMatrix::squared_norm() const
{
    double acc = 0.0;
    for (const auto &v : data_)
        acc += std::norm(v);
    return acc;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(squared_norm()); }

bool ComplexMatrix::all_finite() const
{
    for (const auto &v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

ComplexMatrix ComplexMatrix::conj() const
{
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        out.data_[i] = std::conj(data_[i]);
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const
{
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            out(c, r) = (*this)(r, c);
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const { return transpose().conj(); }

double RealMatrix::sum() const
{
    double acc = 0.0;
    for (double v : data_)
        acc += v;
    return acc;
}

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexMatrix hadamard(const ComplexMatrix &a, const ComplexMatrix &b)
{
    require_same_shape(a, b, "hadamard");
    ComplexMatrix out(a.rows(), a.cols());
    auto o = out.data();
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = x[i] * y[i];
    return out;
}

RealMatrix abs(const ComplexMatrix &a)
{
    RealMatrix out(a.rows(), a.cols());
    auto o = out.data();
    auto x = a.data();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = std::abs(x[i]);
    return out;
}

cplx inner(const ComplexMatrix &a, const ComplexMatrix &b)
{
    require_same_shape(a, b, "inner");
    cplx acc{};
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += x[i] * std::conj(y[i]);
    return acc;
}

ComplexMatrix dft_kernel(std::size_t n)
{
    ComplexMatrix u(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
        {
            // Reduce k*l mod n first so the angle stays small and the kernel is exactly symmetric.
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / static_cast<double>(n);
            u(k, l) = std::polar(scale, angle);
        }
    return u;
}

ComplexMatrix dft2(const ComplexMatrix &a)
{
    require_square(a, "dft2");
    const ComplexMatrix u_adj = dft_kernel(a.rows()).conj(); // U symmetric, so U^* = conj(U)
    return matmul(matmul(u_adj, a), u_adj);
}

ComplexMatrix idft2(const ComplexMatrix &b)
{
    require_square(b, "idft2");
    const ComplexMatrix u = dft_kernel(b.rows());
    return matmul(matmul(u, b), u);
}

ComplexMatrix circ_shift(const ComplexMatrix &p, std::size_t r, std::size_t c)
{
    require_square(p, "circ_shift");
    const std::size_t n = p.rows();
    if (r >= n || c >= n)
        throw std::out_of_range("circ_shift: offset (" + std::to_string(r) + "," + std::to_string(c) +
                                ") outside [0," + std::to_string(n) + ")");
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            out(k, l) = p((k + n - r) % n, (l + n - c) % n);
    return out;
}

namespace
{
ComplexMatrix circ_xcorr_direct(const ComplexMatrix &h, const ComplexMatrix &p)
{
    const std::size_t n = h.rows();
    ComplexMatrix g(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
        {
            cplx acc{};
            // Substituting u = k - r keeps the inner loop contiguous in P.
            for (std::size_t u = 0; u < n; ++u)
            {
                const std::size_t k = (u + r) % n;
                for (std::size_t v = 0; v < n; ++v)
                    acc += h(k, (v + c) % n) * std::conj(p(u, v));
            }
            g(r, c) = acc;
        }
    return g;
}

ComplexMatrix circ_xcorr_fourier(const ComplexMatrix &h, const ComplexMatrix &p)
{
    const double n = static_cast<double>(h.rows());
    ComplexMatrix spectrum = hadamard(dft2(h), dft2(p).conj());
    spectrum *= n;
    return idft2(spectrum);
}
} // namespace

ComplexMatrix circ_xcorr(const ComplexMatrix &h, const ComplexMatrix &p, XcorrAlgorithm algo)
{
    require_square(h, "circ_xcorr");
    require_same_shape(h, p, "circ_xcorr");
    if (algo == XcorrAlgorithm::automatic)
        algo = h.rows() <= 16 ? XcorrAlgorithm::direct : XcorrAlgorithm::fourier;
    return algo == XcorrAlgorithm::direct ? circ_xcorr_direct(h, p) : circ_xcorr_fourier(h, p);
}

RealTensor3 stack_real_tensor(const ComplexMatrix &h)
{
    require_square(h, "stack_real_tensor");
    const std::size_t n = h.rows();
    RealTensor3 t(2 * n, 4 * n, 2);
    for (std::size_t a = 0; a < 2 * n; ++a)
        for (std::size_t b = 0; b < 2 * n; ++b)
        {
            const cplx v = h(a % n, b % n);
            // Left half correlates to Re(G): H_R * P_R + H_I * P_I.
            t(a, b, 0) = v.real();
            t(a, b, 1) = v.imag();
            // Right half correlates to Im(G): H_I * P_R - H_R * P_I.
            t(a, 2 * n + b, 0) = v.imag();
            t(a, 2 * n + b, 1) = -v.real();
        }
    return t;
}

RealTensor3 filter_tensor(const ComplexMatrix &p)
{
    require_square(p, "filter_tensor");
    const std::size_t n = p.rows();
    RealTensor3 f(n, n, 2);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
        {
            f(u, v, 0) = p(u, v).real();
            f(u, v, 1) = p(u, v).imag();
        }
    return f;
}

RealMatrix valid_xcorr(const RealTensor3 &input, const RealTensor3 &filter)
{
    if (filter.channels() != input.channels() || filter.rows() > input.rows() || filter.cols() > input.cols())
        throw DimensionError("valid_xcorr: filter does not fit input");
    const std::size_t out_r = input.rows() - filter.rows() + 1;
    const std::size_t out_c = input.cols() - filter.cols() + 1;
    RealMatrix out(out_r, out_c);
    for (std::size_t r = 0; r < out_r; ++r)
        for (std::size_t c = 0; c < out_c; ++c)
        {
            double acc = 0.0;
            for (std::size_t u = 0; u < filter.rows(); ++u)
                for (std::size_t v = 0; v < filter.cols(); ++v)
                    for (std::size_t ch = 0; ch < filter.channels(); ++ch)
                        acc += input(r + u, c + v, ch) * filter(u, v, ch);
            out(r, c) = acc;
        }
    return out;
}

} // namespace ccsbeam
