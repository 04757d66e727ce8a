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

// Learned 2D-CCS beam predictor.
//
// Pipeline per sample: the base matrix P (the "filter") is correlated with
// every channel slice at the shifts in Omega, each measurement of slice s is
// scaled by the subcarrier amplitude p_s, complex AWGN is added, and the real
// feature vector [Re y_0; Im y_0; Re y_1; Im y_1; ...] feeds a bias-free ReLU
// MLP with a softmax over the N^2 codebook beams.
//
// Gradients are derived by hand. The filter gradient uses
//   dJ/dP_R + j dJ/dP_I = sum_m conj(g_m) H(u + r_m, v + c_m)
// where g_m = dJ/dRe(y_m) + j dJ/dIm(y_m).

#pragma once

#include "ccsbeam/channel.hpp"
#include "ccsbeam/sensing.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ccsbeam
{

struct ModelParams
{
    std::size_t n = 0;
    SubsamplingSet omega;
    ComplexMatrix filter;           ///< P = P_R + j P_I
    std::vector<Eigen::MatrixXd> fc; ///< layer l maps R^{in} -> R^{out}, stored out x in
    /// Per-measurement amplitude weights (length M * n_sc), block-constant after
    /// projection. Empty for narrowband models.
    std::vector<double> power_weights;
    std::size_t n_sc = 1;
    double omega_conv = 1.0; ///< frozen Frobenius norm of the filter
    PhaseResolution resolution;
    int stage = 0;
    std::uint64_t seed = 0;

    std::size_t m() const noexcept { return omega.size(); }
    bool wideband() const noexcept { return !power_weights.empty(); }
    std::size_t input_dim() const noexcept { return 2 * m() * n_sc; }
    std::size_t classes() const noexcept { return n * n; }
    std::vector<std::size_t> hidden_dims() const;

    /// Block values p_s (all ones for narrowband).
    std::vector<double> subcarrier_amplitudes() const;

    /// Base matrix for deployment: N * P / omega_conv (unit-modulus entries).
    ComplexMatrix exported_base_matrix() const;

    /// Throws DimensionError on inconsistent shapes.
    void validate() const;
};

struct ModelSpec
{
    std::size_t n = 16;
    std::size_t m = 40;
    std::vector<std::size_t> hidden{80, 256, 512};
    std::size_t n_sc = 1;
    bool wideband = false;
    PhaseResolution resolution;
    std::uint64_t seed = 1;
};

/// Random initialization: filter phases i.i.d. uniform on [0, 2 pi) with
/// modulus 1/N (omega_conv = 1), He-normal FC weights, uniform p_s.
ModelParams init_model(const ModelSpec &spec);

struct LossValue
{
    double value = 0.0;
    std::size_t clamped = 0; ///< rows whose true-class probability hit the 1e-12 floor
};

/// Everything backward() needs, for one mini-batch.
struct ForwardCache
{
    Eigen::MatrixXd signal;                 ///< noise-free unscaled features, input_dim x B
    std::vector<Eigen::MatrixXd> activations; ///< a_0 (network input) ... a_{L-1}
    std::vector<Eigen::MatrixXd> preacts;   ///< z_1 ... z_{L-1} (hidden layers)
    Eigen::MatrixXd logits;                 ///< classes x B
    Eigen::MatrixXd probs;                  ///< classes x B
    std::vector<const ChannelSample *> samples;
};

/// Noise-free feature vector for one sample (unscaled by p_s).
Eigen::VectorXd signal_features(const ChannelSample &sample, const ModelParams &params);

/// Forward pass on a batch. `noise_keys` is empty (noise-free) or one key per sample.
ForwardCache forward(std::span<const ChannelSample *const> batch, const ModelParams &params, double noise_variance,
                     std::span<const std::uint64_t> noise_keys);

/// Forward pass from precomputed signal features (columns), used when the filter is frozen.
ForwardCache forward_from_signal(const Eigen::MatrixXd &signal, const ModelParams &params, double noise_variance,
                                 std::span<const std::uint64_t> noise_keys);

/// Single-sample convenience wrapper.
ForwardCache forward(const ChannelSample &sample, const ModelParams &params, double noise_variance,
                     std::uint64_t noise_key);

/// Mean cross-entropy, probabilities as columns.
LossValue loss(const Eigen::MatrixXd &probs, std::span<const std::size_t> labels);

struct Gradients
{
    ComplexMatrix filter; ///< dJ/dP_R + j dJ/dP_I; empty when not requested
    std::vector<Eigen::MatrixXd> fc;
    std::vector<double> power_weights;
};

/// Analytic gradients of the mean cross-entropy. Set `with_filter` false to skip
/// the filter term (frozen filter).
Gradients backward(const ForwardCache &cache, std::span<const std::size_t> labels, const ModelParams &params,
                   bool with_filter = true);

/// Plain step w <- w - lr g on every parameter group present in `grads`.
ModelParams sgd_step(ModelParams params, const Gradients &grads, double lr);

/// Heavy-ball momentum; with momentum 0 it reduces to sgd_step.
class MomentumSgd
{
public:
    explicit MomentumSgd(double momentum) : momentum_(momentum) {}
    void step(ModelParams &params, const Gradients &grads, double lr);
    /// Drop the filter velocity (after a projection moves the filter).
    void reset_filter() { velocity_.filter *= cplx(0.0, 0.0); }

private:
    double momentum_;
    Gradients velocity_;
    bool initialized_ = false;
};

/// Replace the filter by its nearest feasible point (omega_conv / N) e^{j phi}, phi on the
/// 2 pi / 2^q grid. Unconstrained resolution keeps the phase and only fixes the modulus.
ModelParams pgd_project_filter(ModelParams params, const PhaseResolution &resolution, double omega_conv);

/// Block-average |w| over each run of `m` weights, then rescale so sum p_s^2 = 1.
/// Returns the block values p (length p_raw.size() / m).
std::vector<double> project_subcarrier_weights(std::span<const double> p_raw, std::size_t m);

/// Apply project_subcarrier_weights in place to params.power_weights.
void project_power_weights(ModelParams &params);

struct TrainConfig
{
    std::size_t epochs = 300;
    std::size_t batch_size = 128;
    double learning_rate = 1e-3;
    std::size_t lr_halve_every = 100;
    double momentum = 0.9;
    std::size_t quant_interval = 10; ///< N_c, in mini-batches
    std::optional<double> snr_db;    ///< empty: noise-free
    std::uint64_t seed = 1;

    double noise_variance() const;
    void validate() const;
};

struct TrainLog
{
    std::vector<double> epoch_loss;
    std::size_t clamped = 0;
    std::size_t projections = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

enum class ProjectionKind
{
    filter,
    power_weights
};

/// Called with the parameters right after each projection.
using ProjectionObserver = std::function<void(ProjectionKind kind, const ModelParams &params)>;

/// Stage 1: jointly trains filter and FC layers on per-sample normalized,
/// noise-free channels, with the filter projected every N_c mini-batches.
/// For finite q the projection acts on an unprojected copy that keeps the
/// steps since the last projection; an entry that changes bin restarts at
/// its new grid point. The returned filter is feasible and has norm omega_conv.
ModelParams train_stage1(const std::vector<ChannelSample> &dataset, const TrainConfig &config, ModelParams init,
                         TrainLog *log = nullptr, const EpochCallback &on_epoch = {},
                         const ProjectionObserver &on_projection = {});

/// Stage 2: retrains FC layers (and subcarrier amplitudes for wideband models)
/// at the configured SNR with the stage-1 filter frozen bit-for-bit.
ModelParams train_stage2(const std::vector<ChannelSample> &dataset, const TrainConfig &config,
                         const ModelParams &stage1, TrainLog *log = nullptr, const EpochCallback &on_epoch = {},
                         const ProjectionObserver &on_projection = {});

/// Received measurement vector for a sample: y_{s,m} = p_s G_s(r_m, c_m) + v_{s,m},
/// ordered s * M + m.
Measurement received_measurement(const ChannelSample &sample, const ModelParams &params, double noise_variance,
                                 std::uint64_t noise_key);

/// Class logits for a received measurement vector.
Eigen::VectorXd logits_from_measurement(std::span<const cplx> y, const ModelParams &params);

/// Argmax of the class probabilities; ties go to the smallest class index.
BeamIndex predict_beam(const Measurement &y, const ModelParams &params);

/// Fraction of samples whose noise-free prediction matches the label.
double training_accuracy(const std::vector<ChannelSample> &dataset, const ModelParams &params);

} // namespace ccsbeam
