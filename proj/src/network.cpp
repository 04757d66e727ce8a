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

#include "ccsbeam/network.hpp"
#include "ccsbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ccsbeam
{

namespace
{
constexpr double loss_floor = 1e-12;

// Stream tags for derive_key
constexpr std::uint64_t tag_init = 0x1417a11ULL;
constexpr std::uint64_t tag_shuffle = 0x5f0ff1eULL;
constexpr std::uint64_t tag_train_noise = 0x7a1e0e5ULL;

void check_sample(const ChannelSample &s, const ModelParams &params)
{
    if (s.slices.size() != params.n_sc)
        throw DimensionError("sample has " + std::to_string(s.slices.size()) + " slices, model expects " +
                             std::to_string(params.n_sc));
    for (const auto &h : s.slices)
        if (h.rows() != params.n || h.cols() != params.n)
            throw DimensionError("sample slice is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                                 ", model expects N=" + std::to_string(params.n));
}

// Amplitude of feature row `row` (Re and Im rows of one measurement share it).
double row_weight(const ModelParams &params, std::size_t row)
{
    if (!params.wideband())
        return 1.0;
    const std::size_t m = params.m();
    const std::size_t s = row / (2 * m);
    return params.power_weights[s * m + row % m];
}

// Runs the MLP on a0 in place of the cache tail.
void run_mlp(ForwardCache &cache, const ModelParams &params)
{
    const std::size_t layers = params.fc.size();
    cache.preacts.clear();
    cache.activations.resize(1);
    for (std::size_t l = 0; l + 1 < layers; ++l)
    {
        Eigen::MatrixXd z = params.fc[l] * cache.activations.back();
        cache.activations.push_back(z.cwiseMax(0.0));
        cache.preacts.push_back(std::move(z));
    }
    cache.logits = params.fc.back() * cache.activations.back();
    cache.probs.resize(cache.logits.rows(), cache.logits.cols());
    for (Eigen::Index b = 0; b < cache.logits.cols(); ++b)
    {
        const double mx = cache.logits.col(b).maxCoeff();
        auto e = (cache.logits.col(b).array() - mx).exp();
        cache.probs.col(b) = e / e.sum();
    }
}

std::size_t argmax_col(const Eigen::VectorXd &v)
{
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (v(i) > v(static_cast<Eigen::Index>(best)))
            best = static_cast<std::size_t>(i);
    return best;
}

Eigen::VectorXd softmax(const Eigen::VectorXd &logits)
{
    const double mx = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - mx).exp();
    return e / e.sum();
}

std::vector<std::size_t> permutation(std::size_t k, std::uint64_t seed, std::size_t epoch)
{
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(seed, {tag_shuffle, epoch});
    for (std::size_t i = k; i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    return order;
}

double learning_rate(const TrainConfig &cfg, std::size_t epoch)
{
    if (cfg.lr_halve_every == 0)
        return cfg.learning_rate;
    return cfg.learning_rate * std::ldexp(1.0, -static_cast<int>(epoch / cfg.lr_halve_every));
}

void check_dataset(const std::vector<ChannelSample> &dataset, const ModelParams &params)
{
    if (dataset.empty())
        throw DataError("training set is empty");
    for (const auto &s : dataset)
    {
        try
        {
            check_sample(s, params);
        }
        catch (const DimensionError &e)
        {
            throw DataError(std::string("dataset does not match model: ") + e.what());
        }
        if (s.label.row >= params.n || s.label.col >= params.n)
            throw DataError("label outside the codebook");
    }
}

std::vector<std::size_t> labels_of(const std::vector<ChannelSample> &dataset, std::span<const std::size_t> idx,
                                   std::size_t n)
{
    std::vector<std::size_t> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        out[i] = dataset[idx[i]].label.flat(n);
    return out;
}
} // namespace

// ------------------------------------------------------------------------
// ModelParams

std::vector<std::size_t> ModelParams::hidden_dims() const
{
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l + 1 < fc.size(); ++l)
        out.push_back(static_cast<std::size_t>(fc[l].rows()));
    return out;
}

std::vector<double> ModelParams::subcarrier_amplitudes() const
{
    if (!wideband())
        return std::vector<double>(n_sc, 1.0);
    std::vector<double> p(n_sc);
    for (std::size_t s = 0; s < n_sc; ++s)
        p[s] = power_weights[s * m()];
    return p;
}

ComplexMatrix ModelParams::exported_base_matrix() const
{
    if (!(omega_conv > 0.0))
        throw DataError("model has no valid filter norm");
    return filter * cplx(static_cast<double>(n) / omega_conv, 0.0);
}

void ModelParams::validate() const
{
    if (n == 0 || filter.rows() != n || filter.cols() != n)
        throw DimensionError("model filter must be N x N");
    if (omega.n() != n || omega.size() == 0)
        throw DimensionError("model subsampling set does not match N");
    if (n_sc == 0)
        throw DimensionError("model needs at least one subcarrier");
    if (fc.empty())
        throw DimensionError("model has no fully-connected layers");
    std::size_t in = input_dim();
    for (const auto &w : fc)
    {
        if (static_cast<std::size_t>(w.cols()) != in)
            throw DimensionError("fully-connected layer input mismatch");
        in = static_cast<std::size_t>(w.rows());
    }
    if (in != classes())
        throw DimensionError("output layer must have N^2 classes");
    if (wideband() && power_weights.size() != m() * n_sc)
        throw DimensionError("subcarrier weights must have length M * N_sc");
}

ModelParams init_model(const ModelSpec &spec)
{
    if (spec.n == 0 || spec.n_sc == 0)
        throw std::invalid_argument("init_model: N and N_sc must be positive");
    ModelParams p;
    p.n = spec.n;
    p.omega = sample_omega(spec.n, spec.m, spec.seed);
    p.n_sc = spec.n_sc;
    p.resolution = spec.resolution;
    p.seed = spec.seed;
    p.omega_conv = 1.0;

    CounterRng frng(spec.seed, {tag_init, 0});
    p.filter = ComplexMatrix::square(spec.n);
    const double mod = p.omega_conv / static_cast<double>(spec.n);
    for (auto &v : p.filter.data())
        v = std::polar(mod, frng.uniform(0.0, 2.0 * std::numbers::pi));

    std::size_t in = p.input_dim();
    std::vector<std::size_t> dims = spec.hidden;
    dims.push_back(p.classes());
    for (std::size_t l = 0; l < dims.size(); ++l)
    {
        if (dims[l] == 0)
            throw std::invalid_argument("init_model: zero-width layer");
        CounterRng wrng(spec.seed, {tag_init, 1 + l});
        const double sd = std::sqrt(2.0 / static_cast<double>(in));
        Eigen::MatrixXd w(dims[l], in);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                w(r, c) = sd * wrng.normal();
        p.fc.push_back(std::move(w));
        in = dims[l];
    }
    if (spec.wideband)
        p.power_weights.assign(p.m() * p.n_sc, 1.0 / std::sqrt(static_cast<double>(p.n_sc)));
    return p;
}

// ------------------------------------------------------------------------
// Forward / loss / backward

Eigen::VectorXd signal_features(const ChannelSample &sample, const ModelParams &params)
{
    check_sample(sample, params);
    const std::size_t m = params.m();
    Eigen::VectorXd f(params.input_dim());
    for (std::size_t s = 0; s < params.n_sc; ++s)
    {
        const auto y = measure_signal(sample.slices[s], params.filter, params.omega);
        for (std::size_t k = 0; k < m; ++k)
        {
            f(static_cast<Eigen::Index>(s * 2 * m + k)) = y[k].real();
            f(static_cast<Eigen::Index>(s * 2 * m + m + k)) = y[k].imag();
        }
    }
    return f;
}

ForwardCache forward_from_signal(const Eigen::MatrixXd &signal, const ModelParams &params, double noise_variance,
                                 std::span<const std::uint64_t> noise_keys)
{
    if (static_cast<std::size_t>(signal.rows()) != params.input_dim())
        throw DimensionError("feature dimension does not match the model");
    if (noise_variance < 0.0)
        throw std::invalid_argument("noise variance must be non-negative");
    const auto batch = static_cast<std::size_t>(signal.cols());
    if (noise_variance > 0.0 && noise_keys.size() != batch)
        throw std::invalid_argument("one noise key per sample is required when noise is on");

    ForwardCache cache;
    cache.signal = signal;
    Eigen::MatrixXd a0 = signal;
    if (params.wideband())
        for (Eigen::Index r = 0; r < a0.rows(); ++r)
            a0.row(r) *= row_weight(params, static_cast<std::size_t>(r));
    if (noise_variance > 0.0)
    {
        const std::size_t m = params.m();
        for (std::size_t b = 0; b < batch; ++b)
        {
            const auto v = draw_noise(noise_keys[b], m * params.n_sc, noise_variance);
            for (std::size_t s = 0; s < params.n_sc; ++s)
                for (std::size_t k = 0; k < m; ++k)
                {
                    const cplx x = v[s * m + k];
                    a0(static_cast<Eigen::Index>(s * 2 * m + k), static_cast<Eigen::Index>(b)) += x.real();
                    a0(static_cast<Eigen::Index>(s * 2 * m + m + k), static_cast<Eigen::Index>(b)) += x.imag();
                }
        }
    }
    cache.activations.push_back(std::move(a0));
    run_mlp(cache, params);
    return cache;
}

ForwardCache forward(std::span<const ChannelSample *const> batch, const ModelParams &params, double noise_variance,
                     std::span<const std::uint64_t> noise_keys)
{
    Eigen::MatrixXd signal(params.input_dim(), batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b)
        signal.col(static_cast<Eigen::Index>(b)) = signal_features(*batch[b], params);
    ForwardCache cache = forward_from_signal(signal, params, noise_variance, noise_keys);
    cache.samples.assign(batch.begin(), batch.end());
    return cache;
}

ForwardCache forward(const ChannelSample &sample, const ModelParams &params, double noise_variance,
                     std::uint64_t noise_key)
{
    const ChannelSample *ptr = &sample;
    return forward(std::span<const ChannelSample *const>(&ptr, 1), params, noise_variance,
                   std::span<const std::uint64_t>(&noise_key, 1));
}

LossValue loss(const Eigen::MatrixXd &probs, std::span<const std::size_t> labels)
{
    if (static_cast<std::size_t>(probs.cols()) != labels.size() || labels.empty())
        throw DimensionError("loss: one label per probability column is required");
    LossValue out;
    double acc = 0.0;
    for (std::size_t b = 0; b < labels.size(); ++b)
    {
        if (labels[b] >= static_cast<std::size_t>(probs.rows()))
            throw DimensionError("loss: label outside the class range");
        double p = probs(static_cast<Eigen::Index>(labels[b]), static_cast<Eigen::Index>(b));
        if (p < loss_floor)
        {
            p = loss_floor;
            ++out.clamped;
        }
        acc -= std::log(p);
    }
    out.value = acc / static_cast<double>(labels.size());
    return out;
}

Gradients backward(const ForwardCache &cache, std::span<const std::size_t> labels, const ModelParams &params,
                   bool with_filter)
{
    const auto batch = static_cast<std::size_t>(cache.probs.cols());
    if (labels.size() != batch || batch == 0)
        throw DimensionError("backward: one label per cached sample is required");
    if (cache.activations.size() != params.fc.size())
        throw DimensionError("backward: cache does not match the model depth");

    Gradients g;
    g.fc.resize(params.fc.size());

    Eigen::MatrixXd delta = cache.probs;
    for (std::size_t b = 0; b < batch; ++b)
        delta(static_cast<Eigen::Index>(labels[b]), static_cast<Eigen::Index>(b)) -= 1.0;
    delta /= static_cast<double>(batch);

    for (std::size_t l = params.fc.size(); l-- > 0;)
    {
        g.fc[l].noalias() = delta * cache.activations[l].transpose();
        Eigen::MatrixXd prev = params.fc[l].transpose() * delta;
        if (l > 0)
            prev = prev.cwiseProduct((cache.preacts[l - 1].array() > 0.0).cast<double>().matrix());
        delta = std::move(prev);
    }
    // delta now holds dJ/da_0 (input_dim x B).

    const std::size_t m = params.m();
    if (params.wideband())
    {
        g.power_weights.assign(params.power_weights.size(), 0.0);
        for (std::size_t s = 0; s < params.n_sc; ++s)
            for (std::size_t k = 0; k < m; ++k)
            {
                const auto re = static_cast<Eigen::Index>(s * 2 * m + k);
                const auto im = static_cast<Eigen::Index>(s * 2 * m + m + k);
                g.power_weights[s * m + k] =
                    delta.row(re).dot(cache.signal.row(re)) + delta.row(im).dot(cache.signal.row(im));
            }
    }

    if (with_filter)
    {
        if (cache.samples.size() != batch)
            throw std::logic_error("backward: filter gradient needs the channel samples in the cache");
        const std::size_t n = params.n;
        g.filter = ComplexMatrix::square(n);
        for (std::size_t b = 0; b < batch; ++b)
        {
            const auto bi = static_cast<Eigen::Index>(b);
            for (std::size_t s = 0; s < params.n_sc; ++s)
            {
                const ComplexMatrix &h = cache.samples[b]->slices[s];
                for (std::size_t k = 0; k < m; ++k)
                {
                    const double w = row_weight(params, s * 2 * m + k);
                    const cplx gamma_conj(w * delta(static_cast<Eigen::Index>(s * 2 * m + k), bi),
                                          -w * delta(static_cast<Eigen::Index>(s * 2 * m + m + k), bi));
                    const auto [r, c] = params.omega[k];
                    for (std::size_t u = 0; u < n; ++u)
                    {
                        const std::size_t hu = (u + r) % n;
                        for (std::size_t v = 0; v < n; ++v)
                            g.filter(u, v) += gamma_conj * h(hu, (v + c) % n);
                    }
                }
            }
        }
    }
    return g;
}

// ------------------------------------------------------------------------
// Optimizer and projections

ModelParams sgd_step(ModelParams params, const Gradients &grads, double lr)
{
    if (lr < 0.0)
        throw std::invalid_argument("sgd_step: learning rate must be non-negative");
    if (!grads.filter.empty())
        params.filter -= grads.filter * cplx(lr, 0.0);
    for (std::size_t l = 0; l < grads.fc.size() && l < params.fc.size(); ++l)
        if (grads.fc[l].size() > 0)
            params.fc[l] -= lr * grads.fc[l];
    if (!grads.power_weights.empty())
        for (std::size_t i = 0; i < params.power_weights.size(); ++i)
            params.power_weights[i] -= lr * grads.power_weights[i];
    return params;
}

void MomentumSgd::step(ModelParams &params, const Gradients &grads, double lr)
{
    if (!initialized_)
    {
        velocity_ = grads;
        initialized_ = true;
    }
    else
    {
        if (!grads.filter.empty())
        {
            velocity_.filter *= cplx(momentum_, 0.0);
            velocity_.filter += grads.filter;
        }
        for (std::size_t l = 0; l < grads.fc.size(); ++l)
            velocity_.fc[l] = momentum_ * velocity_.fc[l] + grads.fc[l];
        for (std::size_t i = 0; i < grads.power_weights.size(); ++i)
            velocity_.power_weights[i] = momentum_ * velocity_.power_weights[i] + grads.power_weights[i];
    }
    Gradients applied = velocity_;
    if (grads.filter.empty())
        applied.filter = ComplexMatrix();
    params = sgd_step(std::move(params), applied, lr);
}

ModelParams pgd_project_filter(ModelParams params, const PhaseResolution &resolution, double omega_conv)
{
    if (!(omega_conv > 0.0))
        throw std::invalid_argument("pgd_project_filter: omega_conv must be positive");
    ComplexMatrix q = resolution.finite() ? nearest_phase(params.filter, *resolution.bits)
                                          : unit_modulus(params.filter);
    q *= cplx(omega_conv / static_cast<double>(params.filter.rows()), 0.0);
    params.filter = std::move(q);
    return params;
}

std::vector<double> project_subcarrier_weights(std::span<const double> p_raw, std::size_t m)
{
    if (m == 0 || p_raw.empty() || p_raw.size() % m != 0)
        throw DimensionError("project_subcarrier_weights: length must be a positive multiple of M");
    const std::size_t blocks = p_raw.size() / m;
    std::vector<double> p(blocks, 0.0);
    for (std::size_t s = 0; s < blocks; ++s)
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            acc += std::abs(p_raw[s * m + k]);
        p[s] = acc / static_cast<double>(m);
    }
    double norm2 = 0.0;
    for (double v : p)
        norm2 += v * v;
    if (!(norm2 > 0.0))
        throw std::domain_error("project_subcarrier_weights: all weights are zero");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double &v : p)
        v *= inv;
    return p;
}

void project_power_weights(ModelParams &params)
{
    if (!params.wideband())
        return;
    const auto p = project_subcarrier_weights(params.power_weights, params.m());
    for (std::size_t s = 0; s < p.size(); ++s)
        std::fill_n(params.power_weights.begin() + static_cast<std::ptrdiff_t>(s * params.m()), params.m(), p[s]);
}

// ------------------------------------------------------------------------
// Training

double TrainConfig::noise_variance() const
{
    return snr_db ? std::pow(10.0, -*snr_db / 10.0) : 0.0;
}

void TrainConfig::validate() const
{
    if (batch_size == 0)
        throw std::invalid_argument("batch size must be >= 1");
    if (quant_interval == 0)
        throw std::invalid_argument("quantization interval N_c must be >= 1");
    if (!(learning_rate >= 0.0) || !(momentum >= 0.0 && momentum < 1.0))
        throw std::invalid_argument("learning rate must be >= 0 and momentum in [0, 1)");
    if (snr_db && !std::isfinite(*snr_db))
        throw std::invalid_argument("training SNR must be finite");
}

ModelParams train_stage1(const std::vector<ChannelSample> &dataset, const TrainConfig &config, ModelParams params,
                         TrainLog *log, const EpochCallback &on_epoch, const ProjectionObserver &on_projection)
{
    config.validate();
    if (config.epochs == 0)
        throw std::invalid_argument("stage 1 needs epochs >= 1");
    params.validate();
    check_dataset(dataset, params);
    const double n2 = static_cast<double>(params.n * params.n);
    for (const auto &s : dataset)
        if (std::abs(s.power() - n2) > 1e-6 * n2)
            throw DataError("stage 1 expects per-sample normalized channels (power N^2)");

    const double sigma2 = config.noise_variance();
    const double omega_conv = params.omega_conv;
    MomentumSgd opt(config.momentum);
    TrainLog local;
    TrainLog &lg = log ? *log : local;
    std::size_t t = 0;

    // Finite q: the unprojected filter carries over between projections, so
    // steps smaller than half a phase bin still accumulate.
    ComplexMatrix latent, anchor;
    auto project = [&] {
        if (params.resolution.finite())
        {
            if (latent.empty())
                latent = params.filter;
            else
            {
                latent += params.filter;
                latent -= anchor;
            }
            latent = unit_modulus(latent);
            latent *= cplx(omega_conv / static_cast<double>(params.n));
            params.filter = latent;
        }
        params = pgd_project_filter(std::move(params), params.resolution, omega_conv);
        if (params.resolution.finite() && !anchor.empty())
            for (std::size_t i = 0; i < anchor.data().size(); ++i)
                if (params.filter.data()[i] != anchor.data()[i])
                    latent.data()[i] = params.filter.data()[i];
        anchor = params.filter;
    };

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
    {
        const double lr = learning_rate(config, epoch);
        const auto order = permutation(dataset.size(), config.seed, epoch);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size)
        {
            if (t % config.quant_interval == 0)
            {
                project();
                opt.reset_filter();
                ++lg.projections;
                if (on_projection)
                    on_projection(ProjectionKind::filter, params);
            }
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            std::vector<const ChannelSample *> batch(idx.size());
            std::vector<std::uint64_t> keys;
            for (std::size_t i = 0; i < idx.size(); ++i)
            {
                batch[i] = &dataset[idx[i]];
                if (sigma2 > 0.0)
                    keys.push_back(derive_key(config.seed, {tag_train_noise, 1, epoch, idx[i]}));
            }
            const auto labels = labels_of(dataset, idx, params.n);
            const auto cache = forward(batch, params, sigma2, keys);
            const auto lv = loss(cache.probs, labels);
            lg.clamped += lv.clamped;
            loss_sum += lv.value * static_cast<double>(idx.size());
            opt.step(params, backward(cache, labels, params, true), lr);
            project_power_weights(params);
            if (on_projection && params.wideband())
                on_projection(ProjectionKind::power_weights, params);
            ++t;
        }
        const double mean_loss = loss_sum / static_cast<double>(dataset.size());
        lg.epoch_loss.push_back(mean_loss);
        if (on_epoch)
            on_epoch(epoch, mean_loss);
    }
    project();
    ++lg.projections;
    if (on_projection)
        on_projection(ProjectionKind::filter, params);
    params.stage = 1;
    return params;
}

ModelParams train_stage2(const std::vector<ChannelSample> &dataset, const TrainConfig &config,
                         const ModelParams &stage1, TrainLog *log, const EpochCallback &on_epoch,
                         const ProjectionObserver &on_projection)
{
    config.validate();
    if (stage1.filter.empty() || stage1.fc.empty())
        throw DataError("stage 2 needs a trained stage-1 model");
    stage1.validate();
    check_dataset(dataset, stage1);

    ModelParams params = stage1;
    const double sigma2 = config.noise_variance();
    MomentumSgd opt(config.momentum);
    TrainLog local;
    TrainLog &lg = log ? *log : local;

    // Frozen filter: the noise-free features never change.
    Eigen::MatrixXd features(params.input_dim(), dataset.size());
    for (std::size_t k = 0; k < dataset.size(); ++k)
        features.col(static_cast<Eigen::Index>(k)) = signal_features(dataset[k], params);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
    {
        const double lr = learning_rate(config, epoch);
        const auto order = permutation(dataset.size(), config.seed, epoch);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size)
        {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            Eigen::MatrixXd sig(features.rows(), static_cast<Eigen::Index>(idx.size()));
            std::vector<std::uint64_t> keys;
            for (std::size_t i = 0; i < idx.size(); ++i)
            {
                sig.col(static_cast<Eigen::Index>(i)) = features.col(static_cast<Eigen::Index>(idx[i]));
                if (sigma2 > 0.0)
                    keys.push_back(derive_key(config.seed, {tag_train_noise, 2, epoch, idx[i]}));
            }
            const auto labels = labels_of(dataset, idx, params.n);
            const auto cache = forward_from_signal(sig, params, sigma2, keys);
            const auto lv = loss(cache.probs, labels);
            lg.clamped += lv.clamped;
            loss_sum += lv.value * static_cast<double>(idx.size());
            opt.step(params, backward(cache, labels, params, false), lr);
            project_power_weights(params);
            if (on_projection && params.wideband())
                on_projection(ProjectionKind::power_weights, params);
        }
        const double mean_loss = loss_sum / static_cast<double>(dataset.size());
        lg.epoch_loss.push_back(mean_loss);
        if (on_epoch)
            on_epoch(epoch, mean_loss);
    }
    params.stage = 2;
    return params;
}

// ------------------------------------------------------------------------
// Inference

Measurement received_measurement(const ChannelSample &sample, const ModelParams &params, double noise_variance,
                                 std::uint64_t noise_key)
{
    check_sample(sample, params);
    const std::size_t m = params.m();
    Measurement out;
    out.noise_variance = noise_variance;
    out.y.resize(m * params.n_sc);
    const auto v = draw_noise(noise_key, out.y.size(), noise_variance);
    for (std::size_t s = 0; s < params.n_sc; ++s)
    {
        const auto y = measure_signal(sample.slices[s], params.filter, params.omega);
        for (std::size_t k = 0; k < m; ++k)
        {
            const double w = params.wideband() ? params.power_weights[s * m + k] : 1.0;
            out.y[s * m + k] = w * y[k] + v[s * m + k];
        }
    }
    return out;
}

Eigen::VectorXd logits_from_measurement(std::span<const cplx> y, const ModelParams &params)
{
    const std::size_t m = params.m();
    if (y.size() != m * params.n_sc)
        throw DimensionError("measurement has length " + std::to_string(y.size()) + ", model expects " +
                             std::to_string(m * params.n_sc));
    Eigen::VectorXd a(params.input_dim());
    for (std::size_t s = 0; s < params.n_sc; ++s)
        for (std::size_t k = 0; k < m; ++k)
        {
            a(static_cast<Eigen::Index>(s * 2 * m + k)) = y[s * m + k].real();
            a(static_cast<Eigen::Index>(s * 2 * m + m + k)) = y[s * m + k].imag();
        }
    for (std::size_t l = 0; l + 1 < params.fc.size(); ++l)
        a = (params.fc[l] * a).cwiseMax(0.0);
    return params.fc.back() * a;
}

BeamIndex predict_beam(const Measurement &y, const ModelParams &params)
{
    return BeamIndex::from_flat(argmax_col(softmax(logits_from_measurement(y.y, params))), params.n);
}

double training_accuracy(const std::vector<ChannelSample> &dataset, const ModelParams &params)
{
    if (dataset.empty())
        return 0.0;
    std::size_t hits = 0;
    for (const auto &s : dataset)
    {
        const auto y = received_measurement(s, params, 0.0, 0);
        if (predict_beam(y, params) == s.label)
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

} // namespace ccsbeam
