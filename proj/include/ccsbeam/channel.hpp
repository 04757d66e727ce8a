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

// Synthetic vehicular channels for an RSU-mounted planar array.
//
// Geometry: the RSU sits at the street side at (0, 0, rsu_height). The N x N
// array lies in the x-z plane and faces the street (+y). Vehicles drive along
// x on lanes at lateral offsets y = lane_offsets[k]. Elevation theta is the
// zenith angle of the departure direction and azimuth phi is measured in the
// horizontal plane from the street axis, so the row spatial frequency is
// cos(theta) = dz/d and the column spatial frequency is
// sin(theta) cos(phi) = dx/d.

#pragma once

#include "ccsbeam/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ccsbeam
{

/// Thrown for invalid datasets, configs and model/data mismatches.
class DataError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Path
{
    double gain = 0.0;      ///< linear amplitude alpha
    double phase = 0.0;     ///< beta [rad]
    double elevation = 0.0; ///< theta [rad], zenith angle
    double azimuth = 0.0;   ///< phi [rad]
    double delay = 0.0;     ///< tau [s]
};

struct PathSet
{
    std::vector<Path> paths;

    /// Throws DataError on empty sets, negative gain/delay or unsorted delays.
    void validate() const;
};

/// Beam index (row, column) in the 2D-DFT codebook.
struct BeamIndex
{
    std::size_t row = 0;
    std::size_t col = 0;

    std::size_t flat(std::size_t n) const noexcept { return row * n + col; }
    static BeamIndex from_flat(std::size_t idx, std::size_t n) noexcept { return {idx / n, idx % n}; }
    bool operator==(const BeamIndex &) const = default;
};

struct ScenarioConfig
{
    std::size_t n = 16;
    double rsu_height = 5.0;
    double rx_height = 1.2;
    std::vector<double> lane_offsets{4.0, 7.0};
    double street_length = 100.0;
    double blockage_probability = 0.27;
    int max_reflections = 1;
    double wall_distance = 10.0; ///< walls at y = +wall_distance and y = -wall_distance
    double reflection_loss_db = 10.0;
    double carrier_hz = 28e9;
    double bandwidth_hz = 100e6;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class PulseShape
{
    raised_cosine,
    ideal ///< Nyquist sinc
};

struct WidebandConfig
{
    std::size_t taps = 128;          ///< L_c
    double sample_period = 1e-8;     ///< T [s]
    std::size_t subcarrier_stride = 8; ///< L_sub
    std::size_t n_sc = 16;           ///< N_sc = L_c / L_sub
    PulseShape pulse = PulseShape::raised_cosine;
    double rolloff = 0.35;
    std::size_t nt = 256; ///< transmit antennas (N^2)
    std::size_t nr = 1;

    void validate() const;
};

/// One channel realization. Narrowband samples hold a single slice; wideband
/// samples hold one slice per extracted subcarrier.
struct ChannelSample
{
    std::vector<ComplexMatrix> slices;
    BeamIndex label;
    bool los = true;

    std::size_t n() const { return slices.empty() ? 0 : slices.front().rows(); }
    /// Mean over slices of ||H_s||_F^2.
    double power() const;
};

enum class DatasetKind
{
    narrowband,
    wideband
};

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string &s);

/// Half-wavelength Vandermonde vector: entry n = exp(j pi delta n).
std::vector<cplx> array_response(std::size_t n, double delta);

/// Sum of rank-one path terms alpha e^{j beta} a(cos theta) a(sin theta cos phi)^T.
ComplexMatrix narrowband_channel(const PathSet &paths, std::size_t n);

/// X = U^* H U^*.
ComplexMatrix beamspace(const ComplexMatrix &h);

/// Per-beam received power sum_s |X_s|^2 / S over the sample's slices.
RealMatrix beam_power(const ChannelSample &sample);

/// Argmax of |beamspace(H)|; ties go to the smallest row-major index.
BeamIndex best_beam_label(const ComplexMatrix &h);

/// Argmax of beam_power(sample), same tie rule. For narrowband samples this
/// equals best_beam_label of the single slice.
BeamIndex best_beam_label(const ChannelSample &sample);

/// Argmax helper over a real matrix with the row-major tie rule.
BeamIndex argmax(const RealMatrix &m);

/// Geometric draw of one scenario realization.
struct ScenarioDraw
{
    PathSet paths;
    bool los = true;
    double x = 0.0;
    std::size_t lane = 0;
};

/// Draws `count` realizations; draw k uses its own derived stream so the
/// result is independent of evaluation order.
std::vector<ScenarioDraw> draw_scenario(const ScenarioConfig &config, long count);

/// Narrowband samples with labels and LOS flags.
std::vector<ChannelSample> gen_scenario(const ScenarioConfig &config, long count);

/// Wideband samples: taps -> extracted subcarriers, label from summed beam power.
std::vector<ChannelSample> gen_wideband_scenario(const ScenarioConfig &config, const WidebandConfig &wcfg,
                                                 long count);

/// Pulse g(t) sampled at t (seconds) for period T.
double pulse_value(PulseShape shape, double t, double period, double rolloff);

/// L_c taps H[n] = sqrt(Nt Nr) sum_l g(nT - tau_l) alpha_l e^{j beta_l} a a^T.
/// Delays are taken as given; callers pass delays relative to the first arrival.
std::vector<ComplexMatrix> wideband_taps(const PathSet &paths, const WidebandConfig &cfg, std::size_t n);

/// Unnormalized DFT across taps at frequency index k.
ComplexMatrix frequency_response(const std::vector<ComplexMatrix> &taps, std::size_t k);

/// Subcarriers {Hhat[s L_sub + 1] : s = 0..N_sc-1}; DC is never extracted.
std::vector<ComplexMatrix> subcarriers(const std::vector<ComplexMatrix> &taps, const WidebandConfig &cfg);

/// Per-sample scaling to power N^2 (||H||_F = N for narrowband).
std::vector<ChannelSample> normalize_stage1(std::vector<ChannelSample> samples);

/// Common scalar so that mean power equals N^2. Returns the scaled samples; the
/// applied amplitude factor is written to *scale when non-null.
std::vector<ChannelSample> normalize_eval(std::vector<ChannelSample> samples, double *scale = nullptr);

/// Empirical probability of each beam being the label.
RealMatrix beamspace_prior(const std::vector<ChannelSample> &samples);

/// Number of prior entries strictly above `threshold`.
std::size_t prior_support_size(const RealMatrix &prior, double threshold);

} // namespace ccsbeam
