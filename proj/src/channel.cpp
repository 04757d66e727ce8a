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

#include "ccsbeam/channel.hpp"
#include "ccsbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ccsbeam
{
namespace
{
constexpr double speed_of_light = 299792458.0;
constexpr double pi = std::numbers::pi;
} // namespace

void PathSet::validate() const
{
    if (paths.empty())
        throw DataError("PathSet: at least one path is required");
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        if (!(paths[i].gain >= 0.0))
            throw DataError("PathSet: path " + std::to_string(i) + " has negative gain");
        if (!(paths[i].delay >= 0.0))
            throw DataError("PathSet: path " + std::to_string(i) + " has negative delay");
        if (i > 0 && paths[i].delay < paths[i - 1].delay)
            throw DataError("PathSet: delays must be sorted non-decreasing");
    }
}

void ScenarioConfig::validate() const
{
    if (n == 0)
        throw DataError("ScenarioConfig: n must be positive");
    if (lane_offsets.empty())
        throw DataError("ScenarioConfig: at least one lane is required");
    for (std::size_t i = 0; i < lane_offsets.size(); ++i)
    {
        if (!(lane_offsets[i] > 0.0))
            throw DataError("ScenarioConfig: lane offsets must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (lane_offsets[i] == lane_offsets[j])
                throw DataError("ScenarioConfig: lane offsets must be distinct");
        if (lane_offsets[i] >= wall_distance)
            throw DataError("ScenarioConfig: lanes must lie between the walls");
    }
    if (!(blockage_probability >= 0.0 && blockage_probability <= 1.0))
        throw DataError("ScenarioConfig: blockage probability must lie in [0,1]");
    if (!(street_length > 0.0) || !(rsu_height > 0.0) || !(carrier_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw DataError("ScenarioConfig: lengths and frequencies must be positive");
    if (max_reflections < 0)
        throw DataError("ScenarioConfig: max_reflections must be >= 0");
    if (!(reflection_loss_db >= 0.0))
        throw DataError("ScenarioConfig: reflection loss must be >= 0 dB");
}

void WidebandConfig::validate() const
{
    if (taps == 0 || subcarrier_stride == 0)
        throw DataError("WidebandConfig: taps and stride must be positive");
    if (taps % subcarrier_stride != 0)
        throw DataError("WidebandConfig: tap count " + std::to_string(taps) + " is not divisible by stride " +
                        std::to_string(subcarrier_stride));
    if (subcarrier_stride < 2)
        throw DataError("WidebandConfig: stride must be >= 2 so the extraction never wraps onto DC");
    if (n_sc != taps / subcarrier_stride)
        throw DataError("WidebandConfig: n_sc must equal taps / stride");
    if (!(sample_period > 0.0))
        throw DataError("WidebandConfig: sample period must be positive");
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw DataError("WidebandConfig: roll-off must lie in [0,1]");
}

double ChannelSample::power() const
{
    if (slices.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto &s : slices)
        acc += s.squared_norm();
    return acc / static_cast<double>(slices.size());
}

std::string to_string(DatasetKind kind) { return kind == DatasetKind::narrowband ? "narrowband" : "wideband"; }

DatasetKind dataset_kind_from_string(const std::string &s)
{
    if (s == "narrowband")
        return DatasetKind::narrowband;
    if (s == "wideband")
        return DatasetKind::wideband;
    throw DataError("unknown dataset kind '" + s + "'");
}

std::vector<cplx> array_response(std::size_t n, double delta)
{
    std::vector<cplx> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = std::polar(1.0, pi * delta * static_cast<double>(i));
    return a;
}

ComplexMatrix narrowband_channel(const PathSet &paths, std::size_t n)
{
    paths.validate();
    ComplexMatrix h(n, n);
    for (const auto &p : paths.paths)
    {
        const auto a_row = array_response(n, std::cos(p.elevation));
        const auto a_col = array_response(n, std::sin(p.elevation) * std::cos(p.azimuth));
        const cplx w = std::polar(p.gain, p.phase);
        for (std::size_t k = 0; k < n; ++k)
        {
            const cplx wk = w * a_row[k];
            for (std::size_t l = 0; l < n; ++l)
                h(k, l) += wk * a_col[l];
        }
    }
    return h;
}

ComplexMatrix beamspace(const ComplexMatrix &h) { return dft2(h); }

RealMatrix beam_power(const ChannelSample &sample)
{
    if (sample.slices.empty())
        throw DataError("beam_power: empty sample");
    const std::size_t n = sample.n();
    RealMatrix power(n, n);
    for (const auto &slice : sample.slices)
    {
        const ComplexMatrix x = dft2(slice);
        for (std::size_t i = 0; i < n * n; ++i)
            power.data()[i] += std::norm(x.data()[i]);
    }
    const double inv = 1.0 / static_cast<double>(sample.slices.size());
    for (double &v : power.data())
        v *= inv;
    return power;
}

BeamIndex argmax(const RealMatrix &m)
{
    std::size_t best = 0;
    auto d = m.data();
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] > d[best])
            best = i;
    return BeamIndex::from_flat(best, m.cols());
}

BeamIndex best_beam_label(const ComplexMatrix &h)
{
    if (h.squared_norm() == 0.0)
        throw DataError("best_beam_label: channel is identically zero");
    return argmax(abs(beamspace(h)));
}

BeamIndex best_beam_label(const ChannelSample &sample)
{
    const RealMatrix p = beam_power(sample);
    if (p.sum() == 0.0)
        throw DataError("best_beam_label: channel is identically zero");
    return argmax(p);
}

namespace
{
struct Point3
{
    double x, y, z;
};

Path path_towards(const Point3 &target, double rsu_height, double amplitude_scale, double wavelength)
{
    const double dx = target.x;
    const double dy = target.y;
    const double dz = target.z - rsu_height;
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    Path p;
    p.elevation = std::acos(std::clamp(dz / dist, -1.0, 1.0));
    p.azimuth = std::atan2(dy, dx);
    p.gain = amplitude_scale * wavelength / (4.0 * pi * dist);
    p.phase = std::fmod(-2.0 * pi * dist / wavelength, 2.0 * pi);
    if (p.phase < 0.0)
        p.phase += 2.0 * pi;
    p.delay = dist / speed_of_light;
    return p;
}
} // namespace

std::vector<ScenarioDraw> draw_scenario(const ScenarioConfig &config, long count)
{
    config.validate();
    if (count <= 0)
        throw DataError("draw_scenario: count must be positive");
    const double wavelength = speed_of_light / config.carrier_hz;
    const double bounce_amp = std::pow(10.0, -config.reflection_loss_db / 20.0);
    const double w = config.wall_distance;

    std::vector<ScenarioDraw> out(static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        CounterRng rng(config.seed, {0x5ce7a110ULL, k});
        ScenarioDraw &d = out[k];
        d.x = rng.uniform(-0.5 * config.street_length, 0.5 * config.street_length);
        d.lane = static_cast<std::size_t>(rng.below(config.lane_offsets.size()));
        d.los = !rng.bernoulli(config.blockage_probability);
        const double y = config.lane_offsets[d.lane];

        if (d.los)
            d.paths.paths.push_back(path_towards({d.x, y, config.rx_height}, config.rsu_height, 1.0, wavelength));

        // Image method across walls at y = +w and y = -w, alternating walls.
        for (int first_wall = 0; first_wall < 2; ++first_wall)
        {
            double img = y;
            double amp = 1.0;
            for (int order = 0; order < config.max_reflections; ++order)
            {
                const bool far_wall = ((order + first_wall) % 2) == 0;
                img = far_wall ? 2.0 * w - img : -2.0 * w - img;
                amp *= bounce_amp;
                d.paths.paths.push_back(
                    path_towards({d.x, img, config.rx_height}, config.rsu_height, amp, wavelength));
            }
        }
        if (d.paths.paths.empty())
            throw DataError("draw_scenario: blocked LOS with max_reflections = 0 leaves no path");
        std::sort(d.paths.paths.begin(), d.paths.paths.end(),
                  [](const Path &a, const Path &b) { return a.delay < b.delay; });
    }
    return out;
}

std::vector<ChannelSample> gen_scenario(const ScenarioConfig &config, long count)
{
    const auto draws = draw_scenario(config, count);
    std::vector<ChannelSample> out;
    out.reserve(draws.size());
    for (const auto &d : draws)
    {
        ChannelSample s;
        s.slices.push_back(narrowband_channel(d.paths, config.n));
        s.los = d.los;
        s.label = best_beam_label(s.slices.front());
        out.push_back(std::move(s));
    }
    return out;
}

double pulse_value(PulseShape shape, double t, double period, double rolloff)
{
    const double x = t / period;
    const auto sinc = [](double v) { return v == 0.0 ? 1.0 : std::sin(pi * v) / (pi * v); };
    if (shape == PulseShape::ideal || rolloff == 0.0)
        return sinc(x);
    const double denom = 1.0 - 4.0 * rolloff * rolloff * x * x;
    if (std::abs(denom) < 1e-12)
        return (pi / 4.0) * sinc(1.0 / (2.0 * rolloff));
    return sinc(x) * std::cos(pi * rolloff * x) / denom;
}

std::vector<ComplexMatrix> wideband_taps(const PathSet &paths, const WidebandConfig &cfg, std::size_t n)
{
    paths.validate();
    cfg.validate();
    const double array_gain = std::sqrt(static_cast<double>(cfg.nt * cfg.nr));
    std::vector<ComplexMatrix> taps;
    taps.reserve(cfg.taps);
    std::vector<ComplexMatrix> rank_one;
    rank_one.reserve(paths.paths.size());
    for (const auto &p : paths.paths)
        rank_one.push_back(narrowband_channel(PathSet{{p}}, n));

    for (std::size_t t = 0; t < cfg.taps; ++t)
    {
        ComplexMatrix h(n, n);
        for (std::size_t l = 0; l < paths.paths.size(); ++l)
        {
            const double g =
                pulse_value(cfg.pulse, static_cast<double>(t) * cfg.sample_period - paths.paths[l].delay,
                            cfg.sample_period, cfg.rolloff);
            if (g != 0.0)
                h += rank_one[l] * cplx(array_gain * g, 0.0);
        }
        taps.push_back(std::move(h));
    }
    return taps;
}

ComplexMatrix frequency_response(const std::vector<ComplexMatrix> &taps, std::size_t k)
{
    if (taps.empty())
        throw DimensionError("frequency_response: no taps");
    const std::size_t lc = taps.size();
    ComplexMatrix out(taps.front().rows(), taps.front().cols());
    for (std::size_t t = 0; t < lc; ++t)
    {
        const double angle = -2.0 * pi * static_cast<double>((k * t) % lc) / static_cast<double>(lc);
        out += taps[t] * std::polar(1.0, angle);
    }
    return out;
}

std::vector<ComplexMatrix> subcarriers(const std::vector<ComplexMatrix> &taps, const WidebandConfig &cfg)
{
    cfg.validate();
    if (taps.size() != cfg.taps)
        throw DimensionError("subcarriers: expected " + std::to_string(cfg.taps) + " taps, got " +
                             std::to_string(taps.size()));
    std::vector<ComplexMatrix> out;
    out.reserve(cfg.n_sc);
    for (std::size_t s = 0; s < cfg.n_sc; ++s)
        out.push_back(frequency_response(taps, s * cfg.subcarrier_stride + 1));
    return out;
}

std::vector<ChannelSample> gen_wideband_scenario(const ScenarioConfig &config, const WidebandConfig &wcfg,
                                                 long count)
{
    wcfg.validate();
    const auto draws = draw_scenario(config, count);
    std::vector<ChannelSample> out;
    out.reserve(draws.size());
    for (auto d : draws)
    {
        const double first = d.paths.paths.front().delay;
        for (auto &p : d.paths.paths)
            p.delay -= first;
        ChannelSample s;
        s.slices = subcarriers(wideband_taps(d.paths, wcfg, config.n), wcfg);
        s.los = d.los;
        s.label = best_beam_label(s);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ChannelSample> normalize_stage1(std::vector<ChannelSample> samples)
{
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        auto &s = samples[i];
        const double p = s.power();
        if (!(p > 0.0))
            throw DataError("normalize_stage1: sample " + std::to_string(i) + " has zero norm");
        const double target = static_cast<double>(s.n());
        const double scale = target / std::sqrt(p);
        for (auto &slice : s.slices)
            slice *= cplx(scale, 0.0);
    }
    return samples;
}

std::vector<ChannelSample> normalize_eval(std::vector<ChannelSample> samples, double *scale)
{
    if (samples.empty())
        throw DataError("normalize_eval: empty sample set");
    double mean = 0.0;
    for (const auto &s : samples)
        mean += s.power();
    mean /= static_cast<double>(samples.size());
    if (!(mean > 0.0))
        throw DataError("normalize_eval: all channels are zero");
    const double n = static_cast<double>(samples.front().n());
    const double amp = n / std::sqrt(mean);
    for (auto &s : samples)
        for (auto &slice : s.slices)
            slice *= cplx(amp, 0.0);
    if (scale)
        *scale = amp;
    return samples;
}

RealMatrix beamspace_prior(const std::vector<ChannelSample> &samples)
{
    if (samples.empty())
        throw DataError("beamspace_prior: empty sample set");
    const std::size_t n = samples.front().n();
    RealMatrix prior(n, n);
    const double w = 1.0 / static_cast<double>(samples.size());
    for (const auto &s : samples)
        prior(s.label.row, s.label.col) += w;
    return prior;
}

std::size_t prior_support_size(const RealMatrix &prior, double threshold)
{
    std::size_t count = 0;
    for (double v : prior.data())
        if (v > threshold)
            ++count;
    return count;
}

} // namespace ccsbeam
