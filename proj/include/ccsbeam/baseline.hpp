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

// Non-learned comparators: random-phase base matrix with OMP recovery, and
// the exhaustive-search oracle.

#pragma once

#include "ccsbeam/channel.hpp"
#include "ccsbeam/sensing.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace ccsbeam
{

struct OmpConfig
{
    std::size_t sparsity = 4;        ///< K
    double residual_tolerance = 1e-10; ///< stop once ||r||^2 <= tol * ||y||^2

    void validate() const;
};

struct OmpResult
{
    BeamIndex beam;
    bool degenerate = false; ///< y == 0, no atom selected
    std::vector<std::size_t> support;
    std::vector<cplx> coefficients;
};

/// I.i.d. phases on the Q_q grid (continuous when unconstrained), |P(k,l)| = 1,
/// so ||P||_F = N.
BaseMatrix random_phase_matrix(std::size_t n, const PhaseResolution &resolution, std::uint64_t seed);

/// Sensing matrix A (M x N^2) with y = A vec(X), X = dft2(H) row-major:
/// row m is conj(vec(dft2(circ_shift(P, r_m, c_m)))).
Eigen::MatrixXcd omp_dictionary(const ComplexMatrix &p, const SubsamplingSet &omega);

/// OMP with a precomputed dictionary.
OmpResult omp_solve(std::span<const cplx> y, const Eigen::MatrixXcd &dictionary, std::size_t n,
                    const OmpConfig &cfg);

/// Convenience wrapper building the dictionary on each call.
BeamIndex omp_predict(const Measurement &y, const BaseMatrix &p, const SubsamplingSet &omega,
                      const OmpConfig &cfg);

/// Oracle: best codebook beam given the true channel.
BeamIndex exhaustive_best(const ComplexMatrix &h);

} // namespace ccsbeam
