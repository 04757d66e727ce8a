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

#include "ccsbeam/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccsbeam
{

/// Raised when a spectral division would blow up (zero in the base matrix spectrum).
class SingularityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// One 2D circulant shift (rows, cols).
struct Shift
{
    std::size_t row = 0;
    std::size_t col = 0;
    bool operator==(const Shift &) const = default;
};

/// Ordered set of M distinct circulant shifts on an N x N grid.
class SubsamplingSet
{
public:
    SubsamplingSet() = default;
    SubsamplingSet(std::size_t n, std::vector<Shift> shifts);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return shifts_.size(); }
    const std::vector<Shift> &shifts() const noexcept { return shifts_; }
    const Shift &operator[](std::size_t m) const { return shifts_[m]; }
    bool operator==(const SubsamplingSet &) const = default;

    /// One `r,c` pair per line, in order.
    std::string to_text() const;
    static SubsamplingSet from_text(std::size_t n, const std::string &text);

private:
    std::size_t n_ = 0;
    std::vector<Shift> shifts_;
};

/// Phase-shifter resolution: a bit count, or unconstrained (continuous phase).
struct PhaseResolution
{
    std::optional<unsigned> bits;

    static PhaseResolution unconstrained() { return {}; }
    static PhaseResolution of_bits(unsigned q) { return {q}; }
    bool finite() const noexcept { return bits.has_value(); }
    std::string to_string() const { return bits ? std::to_string(*bits) : "inf"; }
    static PhaseResolution parse(const std::string &s);
};

/// Phase-shift base matrix with constant modulus |P(k,l)| = norm / N.
struct BaseMatrix
{
    ComplexMatrix p;
    PhaseResolution resolution;

    double norm() const { return p.frobenius_norm(); }
    std::size_t n() const noexcept { return p.rows(); }
};

struct Measurement
{
    std::vector<cplx> y;
    double noise_variance = 0.0;
};

/// M distinct shifts drawn uniformly without replacement.
SubsamplingSet sample_omega(std::size_t n, std::size_t m, std::uint64_t seed);

/// Noise-free y[m] = G(r[m], c[m]) with G = circ_xcorr(H, P), evaluated only at Omega.
std::vector<cplx> measure_signal(const ComplexMatrix &h, const ComplexMatrix &p, const SubsamplingSet &omega);

/// Complex AWGN with independent real/imag parts of variance sigma2 / 2.
/// Draw m consumes normals 2m (real) and 2m+1 (imag) of the keyed stream.
std::vector<cplx> draw_noise(std::uint64_t key, std::size_t count, double noise_variance);

/// y = P_Omega(circ_xcorr(H, P)) + v, with v drawn from `noise_key`.
Measurement measure(const ComplexMatrix &h, const ComplexMatrix &p, const SubsamplingSet &omega,
                    double noise_variance, std::uint64_t noise_key);

/// Floor phase quantizer on the 2 pi / 2^q grid; phases taken in [0, 2 pi).
/// Output entries have unit modulus.
ComplexMatrix quantize_phase(const ComplexMatrix &p, unsigned bits);

/// Euclidean projection onto unit-modulus entries with phases on the 2 pi / 2^q
/// grid (nearest grid phase). Output uses the same representation as quantize_phase.
ComplexMatrix nearest_phase(const ComplexMatrix &p, unsigned bits);

/// Unit-modulus projection keeping phases (the unconstrained-resolution analogue).
ComplexMatrix unit_modulus(const ComplexMatrix &p);

/// |N * U^* P U^*|.
RealMatrix mask(const ComplexMatrix &p);

/// Fraction of mask energy (sum of squares) inside `support`.
double mask_energy_fraction(const RealMatrix &mask, const std::vector<bool> &support);

/// Full-sampling recovery X = dft2(G) / (N conj(dft2(P))).
/// Throws SingularityError if any |Z_eff| < rel_tol * max |Z_eff|.
ComplexMatrix full_recovery(const ComplexMatrix &g, const ComplexMatrix &p, double rel_tol = 1e-9);

} // namespace ccsbeam
