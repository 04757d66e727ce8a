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

#include <doctest.h>

#include "ccsbeam/channel.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace ccsbeam;
using std::numbers::pi;

namespace
{
Path single(double gain, double phase, double theta, double phi, double delay = 0.0)
{
    return Path{gain, phase, theta, phi, delay};
}

ComplexMatrix outer(const std::vector<cplx> &a, const std::vector<cplx> &b)
{
    ComplexMatrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m(i, j) = a[i] * b[j];
    return m;
}
} // namespace

TEST_CASE("array_response - examples")
{
    const auto a0 = array_response(2, 0.0);
    CHECK(std::abs(a0[0] - 1.0) < 1e-15);
    CHECK(std::abs(a0[1] - 1.0) < 1e-15);

    const auto a1 = array_response(2, 1.0);
    CHECK(std::abs(a1[0] - 1.0) < 1e-15);
    CHECK(std::abs(a1[1] + 1.0) < 1e-15);

    const auto a = array_response(4, 0.5);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(a[k] - std::exp(cplx(0.0, pi * 0.5 * static_cast<double>(k)))) < 1e-15);
}

TEST_CASE("narrowband_channel - examples")
{
    const ComplexMatrix h = narrowband_channel(PathSet{{single(1.0, 0.0, pi / 2, 0.0)}}, 2);
    CHECK(std::abs(h(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(h(0, 1) + 1.0) < 1e-12);
    CHECK(std::abs(h(1, 0) - 1.0) < 1e-12);
    CHECK(std::abs(h(1, 1) + 1.0) < 1e-12);

    const Path p1 = single(1.0, 0.3, 1.1, 0.4);
    Path p2 = p1;
    p2.gain = 2.0;
    const ComplexMatrix h1 = narrowband_channel(PathSet{{p1}}, 8);
    const ComplexMatrix h2 = narrowband_channel(PathSet{{p2}}, 8);
    CHECK(oracle::max_abs_diff(h2, h1 * cplx(2.0)) < 1e-12);

    const Path p3 = single(0.7, -1.0, 0.6, 2.0, 1e-9);
    const ComplexMatrix both = narrowband_channel(PathSet{{p1, p3}}, 8);
    CHECK(oracle::max_abs_diff(both, h1 + narrowband_channel(PathSet{{p3}}, 8)) < 1e-12);

    // Term-by-term oracle for one path.
    const ComplexMatrix ref = outer(array_response(8, std::cos(p1.elevation)),
                                    array_response(8, std::sin(p1.elevation) * std::cos(p1.azimuth))) *
                              std::polar(p1.gain, p1.phase);
    CHECK(oracle::max_abs_diff(h1, ref) < 1e-12);

    CHECK_THROWS_AS(narrowband_channel(PathSet{}, 4), DataError);
}

TEST_CASE("PathSet - validation")
{
    CHECK_THROWS_AS(PathSet{}.validate(), DataError);
    CHECK_THROWS_AS(PathSet{{single(-1.0, 0.0, 0.0, 0.0)}}.validate(), DataError);
    CHECK_THROWS_AS(PathSet{{single(1.0, 0.0, 0.0, 0.0, -1.0)}}.validate(), DataError);
    CHECK_THROWS_AS((PathSet{{single(1.0, 0.0, 0.0, 0.0, 2e-9), single(1.0, 0.0, 0.0, 0.0, 1e-9)}}.validate()),
                    DataError);
    CHECK_NOTHROW(PathSet{{single(0.0, 0.0, 0.0, 0.0)}}.validate());
}

TEST_CASE("beamspace - examples")
{
    const ComplexMatrix x = beamspace(ComplexMatrix::square(8, 1.0));
    CHECK(std::abs(x(0, 0) - 8.0) < 1e-12);
    CHECK(x.squared_norm() == doctest::Approx(64.0));

    // On-grid path: spatial frequencies -2p/N, -2q/N.
    const std::size_t n = 8, p = 3, q = 5;
    const ComplexMatrix h = outer(array_response(n, -2.0 * p / static_cast<double>(n)),
                                  array_response(n, -2.0 * q / static_cast<double>(n)));
    const RealMatrix m = abs(beamspace(h));
    std::size_t support = 0;
    for (double v : m.data())
        support += v > 1e-9;
    CHECK(support == 1);
    CHECK(m(p, q) == doctest::Approx(8.0));
    CHECK(best_beam_label(h) == BeamIndex{p, q});

    // Off-grid path leaks energy; the argmax is the nearest grid point.
    const ComplexMatrix off = outer(array_response(n, -2.0 * 3.2 / static_cast<double>(n)),
                                    array_response(n, -2.0 * 4.9 / static_cast<double>(n)));
    const RealMatrix mo = abs(beamspace(off));
    support = 0;
    for (double v : mo.data())
        support += v > 1e-9;
    CHECK(support > 1);
    CHECK(best_beam_label(off) == BeamIndex{3, 5});
}

TEST_CASE("best_beam_label - examples")
{
    CHECK(best_beam_label(ComplexMatrix::square(6, 1.0)) == BeamIndex{0, 0});
    std::mt19937_64 rng(11);
    const ComplexMatrix h = oracle::random_matrix(8, rng);
    const BeamIndex b = best_beam_label(h);
    CHECK(best_beam_label(h * cplx(3.7)) == b);
    CHECK(best_beam_label(h * cplx(1e-6)) == b);

    const ComplexMatrix x = oracle::dft2(h);
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x.data()[i]) > std::abs(x.data()[best]))
            best = i;
    CHECK(b == BeamIndex::from_flat(best, 8));

    CHECK_THROWS_AS(best_beam_label(ComplexMatrix::square(4)), DataError);

    // Ties resolve to the smallest row-major index.
    RealMatrix tie(2, 2, 1.0);
    CHECK(argmax(tie) == BeamIndex{0, 0});
}

TEST_CASE("gen_scenario - examples")
{
    ScenarioConfig cfg;
    cfg.blockage_probability = 0.0;
    auto los = gen_scenario(cfg, 1000);
    CHECK(los.size() == 1000);
    CHECK(std::all_of(los.begin(), los.end(), [](const ChannelSample &s) { return s.los; }));

    cfg.blockage_probability = 1.0;
    auto nlos = gen_scenario(cfg, 300);
    CHECK(std::none_of(nlos.begin(), nlos.end(), [](const ChannelSample &s) { return s.los; }));

    ScenarioConfig def;
    const auto samples = gen_scenario(def, 5000);
    const RealMatrix prior = beamspace_prior(samples);
    const std::size_t support = prior_support_size(prior, 1.0 / (10.0 * 256.0));
    CHECK(support < 256 / 4);
    CHECK(prior.sum() == doctest::Approx(1.0).epsilon(1e-12));

    for (const auto &s : samples)
    {
        REQUIRE(s.slices.size() == 1);
        CHECK(s.label == best_beam_label(s.slices.front()));
    }

    CHECK_THROWS_AS(gen_scenario(def, 0), DataError);
    CHECK_THROWS_AS(gen_scenario(def, -3), DataError);
}

TEST_CASE("gen_scenario - determinism and stream independence")
{
    ScenarioConfig cfg;
    cfg.seed = 42;
    const auto a = gen_scenario(cfg, 200);
    const auto b = gen_scenario(cfg, 200);
    const auto c = gen_scenario(cfg, 50);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].slices.front() == b[i].slices.front());
        CHECK(a[i].label == b[i].label);
    }
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(a[i].slices.front() == c[i].slices.front());
    cfg.seed = 43;
    CHECK_FALSE(gen_scenario(cfg, 1).front().slices.front() == a.front().slices.front());
}

TEST_CASE("gen_scenario - NLOS power gap")
{
    ScenarioConfig cfg;
    cfg.seed = 5;
    const auto s = gen_scenario(cfg, 3000);
    double los = 0.0, nlos = 0.0;
    std::size_t nl = 0, nn = 0;
    for (const auto &x : s)
    {
        if (x.los)
        {
            los += x.power();
            ++nl;
        }
        else
        {
            nlos += x.power();
            ++nn;
        }
    }
    REQUIRE(nl > 0);
    REQUIRE(nn > 0);
    const double gap_db = 10.0 * std::log10((los / static_cast<double>(nl)) / (nlos / static_cast<double>(nn)));
    CHECK(gap_db >= 8.0);
}

TEST_CASE("wideband_taps - examples")
{
    WidebandConfig cfg;
    cfg.taps = 16;
    cfg.subcarrier_stride = 2;
    cfg.n_sc = 8;
    cfg.pulse = PulseShape::ideal;
    cfg.nt = 16;
    const std::size_t n = 4;
    const Path p = single(1.0, 0.4, 1.0, 0.7, 0.0);
    const auto taps = wideband_taps(PathSet{{p}}, cfg, n);
    REQUIRE(taps.size() == 16);
    const ComplexMatrix ref = narrowband_channel(PathSet{{p}}, n) * cplx(4.0);
    CHECK(oracle::max_abs_diff(taps[0], ref) < 1e-12);
    for (std::size_t t = 1; t < taps.size(); ++t)
        CHECK(taps[t].frobenius_norm() < 1e-12);

    const auto zero = wideband_taps(PathSet{{single(0.0, 0.4, 1.0, 0.7)}}, cfg, n);
    for (const auto &t : zero)
        CHECK(t.frobenius_norm() == 0.0);

    const Path q = single(0.5, -0.2, 0.8, 1.9, 3.0 * cfg.sample_period);
    const auto two = wideband_taps(PathSet{{p, q}}, cfg, n);
    CHECK(oracle::max_abs_diff(two[3], narrowband_channel(PathSet{{q}}, n) * cplx(4.0)) < 1e-12);
    CHECK(oracle::max_abs_diff(two[0], ref) < 1e-12);
}

TEST_CASE("pulse_value - raised cosine")
{
    const double t = 1e-8;
    CHECK(pulse_value(PulseShape::raised_cosine, 0.0, t, 0.35) == doctest::Approx(1.0));
    for (int k = 1; k < 6; ++k)
        CHECK(std::abs(pulse_value(PulseShape::raised_cosine, k * t, t, 0.35)) < 1e-12);
    // Singular points t = +-T / (2 beta) are finite.
    const double ts = t / (2.0 * 0.35);
    CHECK(std::isfinite(pulse_value(PulseShape::raised_cosine, ts, t, 0.35)));
    CHECK(pulse_value(PulseShape::raised_cosine, ts, t, 0.35) ==
          doctest::Approx(pulse_value(PulseShape::raised_cosine, ts * (1 + 1e-7), t, 0.35)).epsilon(1e-5));
}

TEST_CASE("subcarriers - examples")
{
    WidebandConfig cfg;
    cfg.taps = 8;
    cfg.subcarrier_stride = 2;
    cfg.n_sc = 4;
    std::mt19937_64 rng(12);

    std::vector<ComplexMatrix> taps(8, ComplexMatrix::square(3));
    taps[0] = oracle::random_matrix(3, rng);
    for (const auto &s : subcarriers(taps, cfg))
        CHECK(oracle::max_abs_diff(s, taps[0]) < 1e-12);

    std::vector<ComplexMatrix> zeros(8, ComplexMatrix::square(3));
    for (const auto &s : subcarriers(zeros, cfg))
        CHECK(s.frobenius_norm() == 0.0);

    taps[1] = oracle::random_matrix(3, rng);
    const auto sc = subcarriers(taps, cfg);
    const std::size_t idx[] = {1, 3, 5, 7};
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
            {
                cplx ref{};
                for (std::size_t t = 0; t < 8; ++t)
                    ref += taps[t](a, b) * std::exp(cplx(0.0, -2.0 * pi * static_cast<double>(idx[s] * t) / 8.0));
                CHECK(std::abs(sc[s](a, b) - ref) < 1e-12);
            }

    WidebandConfig bad = cfg;
    bad.subcarrier_stride = 3;
    CHECK_THROWS_AS(subcarriers(taps, bad), DataError);
}

TEST_CASE("subcarriers - full-grid round trip")
{
    std::mt19937_64 rng(13);
    const std::size_t lc = 8;
    std::vector<ComplexMatrix> taps;
    for (std::size_t t = 0; t < lc; ++t)
        taps.push_back(oracle::random_matrix(3, rng));
    std::vector<ComplexMatrix> freq;
    for (std::size_t k = 0; k < lc; ++k)
        freq.push_back(frequency_response(taps, k));
    for (std::size_t t = 0; t < lc; ++t)
    {
        ComplexMatrix back = ComplexMatrix::square(3);
        for (std::size_t k = 0; k < lc; ++k)
            back += freq[k] * std::polar(1.0 / static_cast<double>(lc), 2.0 * pi * static_cast<double>(k * t) / lc);
        CHECK(oracle::max_abs_diff(back, taps[t]) < 1e-10);
    }
}

TEST_CASE("gen_wideband_scenario - labels and layout")
{
    ScenarioConfig sc;
    sc.n = 8;
    WidebandConfig w;
    w.taps = 32;
    w.subcarrier_stride = 4;
    w.n_sc = 8;
    w.nt = 64;
    const auto s = gen_wideband_scenario(sc, w, 40);
    REQUIRE(s.size() == 40);
    for (const auto &x : s)
    {
        CHECK(x.slices.size() == 8);
        CHECK(x.label == argmax(beam_power(x)));
    }
}

TEST_CASE("normalize_stage1 - examples")
{
    std::mt19937_64 rng(14);
    const std::size_t n = 6;
    ComplexMatrix h = oracle::random_matrix(n, rng);
    h *= cplx(2.0 * static_cast<double>(n) / h.frobenius_norm());
    const auto out = normalize_stage1({ChannelSample{{h}, {}, true}});
    CHECK(oracle::max_abs_diff(out[0].slices[0], h * cplx(0.5)) < 1e-12);

    const auto again = normalize_stage1(out);
    CHECK(oracle::max_abs_diff(again[0].slices[0], out[0].slices[0]) < 1e-12);

    std::vector<ChannelSample> batch;
    for (int i = 0; i < 20; ++i)
    {
        ComplexMatrix r = oracle::random_matrix(n, rng);
        r *= cplx(std::exp(i * 0.3));
        batch.push_back({{r}, best_beam_label(r), true});
    }
    for (const auto &s : normalize_stage1(batch))
        CHECK(std::abs(s.slices[0].frobenius_norm() - static_cast<double>(n)) < 1e-12);

    CHECK_THROWS_AS(normalize_stage1({ChannelSample{{ComplexMatrix::square(n)}, {}, true}}), DataError);
}

TEST_CASE("normalize_eval - examples")
{
    std::mt19937_64 rng(15);
    const std::size_t n = 4;
    ComplexMatrix h = oracle::random_matrix(n, rng);
    h *= cplx(2.0 * static_cast<double>(n) / h.frobenius_norm());
    double scale = 0.0;
    normalize_eval({{{h}, {}, true}, {{h}, {}, true}}, &scale);
    CHECK(scale == doctest::Approx(0.5).epsilon(1e-14));

    ComplexMatrix unit = h * cplx(0.5);
    normalize_eval({{{unit}, {}, true}}, &scale);
    CHECK(scale == doctest::Approx(1.0).epsilon(1e-14));

    ScenarioConfig cfg;
    const auto raw = gen_scenario(cfg, 2000);
    const auto norm = normalize_eval(raw, &scale);
    double mean = 0.0;
    for (const auto &s : norm)
        mean += s.power();
    mean /= static_cast<double>(norm.size());
    CHECK(std::abs(mean - static_cast<double>(cfg.n * cfg.n)) < 1e-9 * static_cast<double>(cfg.n * cfg.n));

    auto ratio = [](const std::vector<ChannelSample> &v) {
        double l = 0.0, nl = 0.0;
        for (const auto &s : v)
            (s.los ? l : nl) += s.power();
        return l / nl;
    };
    CHECK(ratio(norm) == doctest::Approx(ratio(raw)).epsilon(1e-12));
    for (std::size_t i = 0; i < raw.size(); i += 97)
        CHECK(norm[i].power() / raw[i].power() == doctest::Approx(scale * scale).epsilon(1e-12));

    CHECK_THROWS_AS(normalize_eval({}), DataError);
}

TEST_CASE("beamspace_prior - examples")
{
    const ComplexMatrix h = ComplexMatrix::square(4, 1.0);
    std::vector<ChannelSample> same(5, ChannelSample{{h}, {1, 2}, true});
    const RealMatrix p = beamspace_prior(same);
    CHECK(p(1, 2) == 1.0);
    CHECK(p.sum() == 1.0);

    const RealMatrix two = beamspace_prior({{{h}, {0, 0}, true}, {{h}, {3, 1}, true}});
    CHECK(two(0, 0) == 0.5);
    CHECK(two(3, 1) == 0.5);
    CHECK(prior_support_size(two, 0.1) == 2);

    CHECK_THROWS_AS(beamspace_prior({}), DataError);
}
