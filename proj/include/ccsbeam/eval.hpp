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

// Alignment metrics and SNR x M sweeps.
//
// Noise for sample k at SNR index i is drawn from the key (seed, k, i), so
// every method sees the same realization (paired comparison). Beam metrics on
// wideband samples use the subcarrier-averaged beam power.

#pragma once

#include "ccsbeam/baseline.hpp"
#include "ccsbeam/network.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ccsbeam
{

/// |X(i,j)|^2 / sigma2 with X = dft2(H).
double snr_bf(const ComplexMatrix &h, BeamIndex beam, double noise_variance);

/// Subcarrier-averaged variant on a sample.
double snr_bf(const ChannelSample &sample, BeamIndex beam, double noise_variance);

double alignment_probability(std::span<const BeamIndex> predictions, std::span<const BeamIndex> labels);

/// 10 log10(|X(i*,j*)|^2 / |X(i,j)|^2); +inf when the predicted beam has zero power.
double beamforming_loss(const ComplexMatrix &h, BeamIndex predicted);
double beamforming_loss(const ChannelSample &sample, BeamIndex predicted);

/// log2(1 + SNR_BF).
double rate(const ComplexMatrix &h, BeamIndex beam, double noise_variance);
double rate(const ChannelSample &sample, BeamIndex beam, double noise_variance);

enum class MethodKind
{
    learned,
    omp,
    oracle
};

struct Method
{
    std::string name;
    MethodKind kind = MethodKind::learned;
    /// Learned models indexed by M. Each must match the dataset N.
    std::map<std::size_t, const ModelParams *> models;
    /// Feed only the first slice (narrowband comparator on wideband data).
    bool first_slice_only = false;
};

struct SweepConfig
{
    std::vector<double> snr_db;
    std::vector<std::size_t> m_grid;
    std::uint64_t seed = 1;
    OmpConfig omp;
    PhaseResolution omp_resolution; ///< phase grid of the random base matrix
    bool keep_predictions = false;
};

struct EvalRow
{
    double snr_db = 0.0;
    std::size_t m = 0;
    std::string method;
    double alignment_prob = 0.0;
    double bf_loss_db = 0.0;   ///< mean over finite-loss samples
    double rate = 0.0;
    std::size_t infinite_loss = 0; ///< samples excluded from the loss mean
    std::size_t degenerate = 0;    ///< OMP calls with y == 0
    std::uint64_t noise_hash = 0;  ///< FNV-1a over the noise consumed by this row
    std::vector<BeamIndex> predictions;
};

struct EvalReport
{
    std::vector<EvalRow> rows;
    std::uint64_t dataset_hash = 0;
    std::vector<std::uint64_t> model_hashes;
    std::uint64_t seed = 0;
};

/// Noise key for (sample, snr index).
std::uint64_t eval_noise_key(std::uint64_t seed, std::size_t sample, std::size_t snr_index);

/// Runs every (snr, M, method) triple. Samples are expected to be normalized
/// with normalize_eval; sigma2 = 10^(-snr/10).
EvalReport sweep(const std::vector<ChannelSample> &dataset, const std::vector<Method> &methods,
                 const SweepConfig &config);

/// `snr_db,m,method,alignment_prob,bf_loss_db,rate` with %.6g numbers and LF endings.
void write_csv(std::ostream &os, const EvalReport &report);
std::string format_g6(double v);

} // namespace ccsbeam
