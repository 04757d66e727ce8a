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

#include "ccsbeam/eval.hpp"
#include "ccsbeam/rng.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ccsbeam
{

namespace
{
void require_noise(double noise_variance)
{
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("noise variance must be positive");
}

double beam_gain(const RealMatrix &power, BeamIndex beam)
{
    if (beam.row >= power.rows() || beam.col >= power.cols())
        throw DimensionError("beam index outside the codebook");
    return power(beam.row, beam.col);
}

double loss_from_power(const RealMatrix &power, BeamIndex predicted)
{
    const double best = beam_gain(power, argmax(power));
    const double got = beam_gain(power, predicted);
    if (!(got > 0.0))
        return std::numeric_limits<double>::infinity();
    return std::max(0.0, 10.0 * std::log10(best / got));
}

void hash_noise(std::uint64_t &h, std::span<const cplx> v)
{
    h = fnv1a({reinterpret_cast<const unsigned char *>(v.data()), v.size_bytes()}, h);
}
} // namespace

double snr_bf(const ComplexMatrix &h, BeamIndex beam, double noise_variance)
{
    require_noise(noise_variance);
    const ComplexMatrix x = beamspace(h);
    if (beam.row >= x.rows() || beam.col >= x.cols())
        throw DimensionError("beam index outside the codebook");
    return std::norm(x(beam.row, beam.col)) / noise_variance;
}

double snr_bf(const ChannelSample &sample, BeamIndex beam, double noise_variance)
{
    require_noise(noise_variance);
    return beam_gain(beam_power(sample), beam) / noise_variance;
}

double alignment_probability(std::span<const BeamIndex> predictions, std::span<const BeamIndex> labels)
{
    if (predictions.size() != labels.size())
        throw DimensionError("alignment_probability: length mismatch");
    if (predictions.empty())
        throw std::invalid_argument("alignment_probability: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        hits += predictions[i] == labels[i];
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double beamforming_loss(const ComplexMatrix &h, BeamIndex predicted)
{
    const RealMatrix power = abs(beamspace(h));
    RealMatrix p2(power.rows(), power.cols());
    for (std::size_t i = 0; i < p2.data().size(); ++i)
        p2.data()[i] = power.data()[i] * power.data()[i];
    return loss_from_power(p2, predicted);
}

double beamforming_loss(const ChannelSample &sample, BeamIndex predicted)
{
    return loss_from_power(beam_power(sample), predicted);
}

double rate(const ComplexMatrix &h, BeamIndex beam, double noise_variance)
{
    return std::log2(1.0 + snr_bf(h, beam, noise_variance));
}

double rate(const ChannelSample &sample, BeamIndex beam, double noise_variance)
{
    return std::log2(1.0 + snr_bf(sample, beam, noise_variance));
}

std::uint64_t eval_noise_key(std::uint64_t seed, std::size_t sample, std::size_t snr_index)
{
    return derive_key(seed, {0xe7a1ULL, sample, snr_index});
}

EvalReport sweep(const std::vector<ChannelSample> &dataset, const std::vector<Method> &methods,
                 const SweepConfig &config)
{
    if (dataset.empty())
        throw DataError("evaluation set is empty");
    if (config.snr_db.empty() || config.m_grid.empty())
        throw std::invalid_argument("sweep: SNR and M grids must be non-empty");
    const std::size_t n = dataset.front().n();

    // Resolve models up front so a missing pair fails before any work.
    for (const auto &method : methods)
        for (std::size_t m : config.m_grid)
            if (method.kind == MethodKind::learned)
            {
                const auto it = method.models.find(m);
                if (it == method.models.end() || it->second == nullptr)
                    throw DataError("no model for method '" + method.name + "' at M=" + std::to_string(m));
                if (it->second->n != n)
                    throw DataError("model for method '" + method.name + "' has N=" +
                                    std::to_string(it->second->n) + ", dataset has N=" + std::to_string(n));
            }

    // Beam powers once per sample.
    std::vector<RealMatrix> power(dataset.size());
    std::vector<BeamIndex> labels(dataset.size());
    for (std::size_t k = 0; k < dataset.size(); ++k)
    {
        power[k] = beam_power(dataset[k]);
        labels[k] = dataset[k].label;
    }

    // Random base matrix for OMP, transmitted at unit Frobenius norm.
    const BaseMatrix random_p = random_phase_matrix(n, config.omp_resolution, config.seed);
    const ComplexMatrix tx_p = random_p.p * cplx(1.0 / static_cast<double>(n), 0.0);

    EvalReport report;
    report.seed = config.seed;
    for (std::size_t si = 0; si < config.snr_db.size(); ++si)
    {
        const double snr = config.snr_db[si];
        const double sigma2 = std::pow(10.0, -snr / 10.0);
        for (std::size_t m : config.m_grid)
        {
            Eigen::MatrixXcd dict;
            SubsamplingSet omp_omega;
            for (const auto &method : methods)
            {
                EvalRow row;
                row.snr_db = snr;
                row.m = m;
                row.method = method.name;
                row.noise_hash = 0xcbf29ce484222325ULL;
                std::vector<BeamIndex> pred(dataset.size());
                if (method.kind == MethodKind::omp && dict.size() == 0)
                {
                    omp_omega = sample_omega(n, m, config.seed);
                    dict = omp_dictionary(tx_p, omp_omega);
                }
                for (std::size_t k = 0; k < dataset.size(); ++k)
                {
                    const std::uint64_t key = eval_noise_key(config.seed, k, si);
                    const ChannelSample &s = dataset[k];
                    switch (method.kind)
                    {
                    case MethodKind::oracle:
                        pred[k] = argmax(power[k]);
                        break;
                    case MethodKind::omp: {
                        Measurement y = measure(s.slices.front(), tx_p, omp_omega, sigma2, key);
                        hash_noise(row.noise_hash, draw_noise(key, m, sigma2));
                        const OmpResult r = omp_solve(y.y, dict, n, config.omp);
                        row.degenerate += r.degenerate;
                        pred[k] = r.beam;
                        break;
                    }
                    case MethodKind::learned: {
                        const ModelParams &model = *method.models.at(m);
                        Measurement y;
                        if (method.first_slice_only && s.slices.size() > 1)
                        {
                            ChannelSample first{{s.slices.front()}, s.label, s.los};
                            y = received_measurement(first, model, sigma2, key);
                        }
                        else
                            y = received_measurement(s, model, sigma2, key);
                        hash_noise(row.noise_hash, draw_noise(key, y.y.size(), sigma2));
                        pred[k] = predict_beam(y, model);
                        break;
                    }
                    }
                }
                double loss_sum = 0.0, rate_sum = 0.0;
                std::size_t finite = 0;
                for (std::size_t k = 0; k < dataset.size(); ++k)
                {
                    const double l = loss_from_power(power[k], pred[k]);
                    if (std::isfinite(l))
                    {
                        loss_sum += l;
                        ++finite;
                    }
                    else
                        ++row.infinite_loss;
                    rate_sum += std::log2(1.0 + beam_gain(power[k], pred[k]) / sigma2);
                }
                row.alignment_prob = alignment_probability(pred, labels);
                row.bf_loss_db = finite ? loss_sum / static_cast<double>(finite) : 0.0;
                row.rate = rate_sum / static_cast<double>(dataset.size());
                if (config.keep_predictions)
                    row.predictions = std::move(pred);
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

std::string format_g6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_csv(std::ostream &os, const EvalReport &report)
{
    os << "snr_db,m,method,alignment_prob,bf_loss_db,rate\n";
    for (const auto &r : report.rows)
        os << format_g6(r.snr_db) << ',' << r.m << ',' << r.method << ',' << format_g6(r.alignment_prob) << ','
           << format_g6(r.bf_loss_db) << ',' << format_g6(r.rate) << '\n';
}

} // namespace ccsbeam
