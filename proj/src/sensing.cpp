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

#include "ccsbeam/sensing.hpp"
#include "ccsbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace ccsbeam
{

SubsamplingSet::SubsamplingSet(std::size_t n, std::vector<Shift> shifts) : n_(n), shifts_(std::move(shifts))
{
    if (shifts_.empty() || shifts_.size() > n_ * n_)
        throw std::invalid_argument("SubsamplingSet: size must lie in [1, N^2]");
    std::set<std::size_t> seen;
    for (const auto &s : shifts_)
    {
        if (s.row >= n_ || s.col >= n_)
            throw std::out_of_range("SubsamplingSet: shift (" + std::to_string(s.row) + "," + std::to_string(s.col) +
                                    ") outside the grid");
        if (!seen.insert(s.row * n_ + s.col).second)
            throw std::invalid_argument("SubsamplingSet: duplicate shift (" + std::to_string(s.row) + "," +
                                        std::to_string(s.col) + ")");
    }
}

std::string SubsamplingSet::to_text() const
{
    std::ostringstream os;
    for (const auto &s : shifts_)
        os << s.row << ',' << s.col << '\n';
    return os.str();
}

SubsamplingSet SubsamplingSet::from_text(std::size_t n, const std::string &text)
{
    std::vector<Shift> shifts;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("SubsamplingSet: malformed line '" + line + "'");
        shifts.push_back({std::stoul(line.substr(0, comma)), std::stoul(line.substr(comma + 1))});
    }
    return SubsamplingSet(n, std::move(shifts));
}

PhaseResolution PhaseResolution::parse(const std::string &s)
{
    if (s == "inf" || s == "unconstrained" || s == "0")
        return unconstrained();
    const int q = std::stoi(s);
    if (q < 1 || q > 30)
        throw std::invalid_argument("phase resolution must be 'inf' or a bit count in [1,30], got '" + s + "'");
    return of_bits(static_cast<unsigned>(q));
}

SubsamplingSet sample_omega(std::size_t n, std::size_t m, std::uint64_t seed)
{
    if (m < 1 || m > n * n)
        throw std::invalid_argument("sample_omega: M=" + std::to_string(m) + " outside [1, N^2]");
    std::vector<std::size_t> grid(n * n);
    std::iota(grid.begin(), grid.end(), std::size_t{0});
    CounterRng rng(seed, {0x0e6a5e7ULL, n, m});
    // Partial Fisher-Yates: the first m slots form the ordered draw.
    for (std::size_t i = 0; i < m; ++i)
    {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(grid.size() - i));
        std::swap(grid[i], grid[j]);
    }
    std::vector<Shift> shifts(m);
    for (std::size_t i = 0; i < m; ++i)
        shifts[i] = {grid[i] / n, grid[i] % n};
    return SubsamplingSet(n, std::move(shifts));
}

std::vector<cplx> measure_signal(const ComplexMatrix &h, const ComplexMatrix &p, const SubsamplingSet &omega)
{
    if (!h.is_square() || h.rows() != p.rows() || h.cols() != p.cols() || h.rows() != omega.n())
        throw DimensionError("measure: channel, base matrix and subsampling set disagree on N");
    const std::size_t n = h.rows();
    std::vector<cplx> y(omega.size());
    for (std::size_t m = 0; m < omega.size(); ++m)
    {
        const auto [r, c] = omega[m];
        cplx acc{};
        for (std::size_t u = 0; u < n; ++u)
        {
            const std::size_t k = (u + r) % n;
            for (std::size_t v = 0; v < n; ++v)
                acc += h(k, (v + c) % n) * std::conj(p(u, v));
        }
        y[m] = acc;
    }
    return y;
}

std::vector<cplx> draw_noise(std::uint64_t key, std::size_t count, double noise_variance)
{
    if (noise_variance < 0.0)
        throw std::invalid_argument("noise variance must be non-negative");
    std::vector<cplx> v(count);
    if (noise_variance == 0.0)
        return v;
    CounterRng rng(key);
    const double sd = std::sqrt(noise_variance / 2.0);
    for (auto &x : v)
    {
        const double re = rng.normal();
        const double im = rng.normal();
        x = {sd * re, sd * im};
    }
    return v;
}

Measurement measure(const ComplexMatrix &h, const ComplexMatrix &p, const SubsamplingSet &omega,
                    double noise_variance, std::uint64_t noise_key)
{
    Measurement out;
    out.noise_variance = noise_variance;
    out.y = measure_signal(h, p, omega);
    const auto v = draw_noise(noise_key, out.y.size(), noise_variance);
    for (std::size_t m = 0; m < out.y.size(); ++m)
        out.y[m] += v[m];
    return out;
}

ComplexMatrix quantize_phase(const ComplexMatrix &p, unsigned bits)
{
    if (bits < 1)
        throw std::invalid_argument("quantize_phase: q must be >= 1");
    const double two_pi = 2.0 * std::numbers::pi;
    const std::uint64_t levels = std::uint64_t{1} << bits;
    const double step = two_pi / static_cast<double>(levels);
    ComplexMatrix out(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        const cplx v = p.data()[i];
        if (v == cplx{})
            throw std::domain_error("quantize_phase: zero entry at index " + std::to_string(i) +
                                    " has no defined phase");
        double angle = std::arg(v);
        if (angle < 0.0)
            angle += two_pi;
        // The 1e-9 guard keeps grid points fixed under round-off in arg().
        auto k = static_cast<std::uint64_t>(std::floor(angle / step + 1e-9));
        k %= levels;
        out.data()[i] = std::polar(1.0, step * static_cast<double>(k));
    }
    return out;
}

ComplexMatrix nearest_phase(const ComplexMatrix &p, unsigned bits)
{
    if (bits < 1)
        throw std::invalid_argument("nearest_phase: q must be >= 1");
    const double two_pi = 2.0 * std::numbers::pi;
    const std::uint64_t levels = std::uint64_t{1} << bits;
    const double step = two_pi / static_cast<double>(levels);
    ComplexMatrix out(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        const cplx v = p.data()[i];
        if (v == cplx{})
            throw std::domain_error("nearest_phase: zero entry at index " + std::to_string(i) +
                                    " has no defined phase");
        double angle = std::arg(v);
        if (angle < 0.0)
            angle += two_pi;
        auto k = static_cast<std::uint64_t>(std::llround(angle / step));
        k %= levels;
        out.data()[i] = std::polar(1.0, step * static_cast<double>(k));
    }
    return out;
}

ComplexMatrix unit_modulus(const ComplexMatrix &p)
{
    ComplexMatrix out(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        const cplx v = p.data()[i];
        if (v == cplx{})
            throw std::domain_error("unit_modulus: zero entry at index " + std::to_string(i) +
                                    " has no defined phase");
        out.data()[i] = v / std::abs(v);
    }
    return out;
}

RealMatrix mask(const ComplexMatrix &p)
{
    RealMatrix m = abs(dft2(p));
    const double n = static_cast<double>(p.rows());
    for (double &v : m.data())
        v *= n;
    return m;
}

double mask_energy_fraction(const RealMatrix &mask, const std::vector<bool> &support)
{
    if (support.size() != mask.data().size())
        throw DimensionError("mask_energy_fraction: support size mismatch");
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i)
    {
        const double e = mask.data()[i] * mask.data()[i];
        total += e;
        if (support[i])
            inside += e;
    }
    return total > 0.0 ? inside / total : 0.0;
}

ComplexMatrix full_recovery(const ComplexMatrix &g, const ComplexMatrix &p, double rel_tol)
{
    if (!g.is_square() || g.rows() != p.rows() || g.cols() != p.cols())
        throw DimensionError("full_recovery: G and P must be N x N");
    const std::size_t n = p.rows();
    ComplexMatrix z = dft2(p).conj();
    z *= cplx(static_cast<double>(n), 0.0);

    double zmax = 0.0;
    for (const auto &v : z.data())
        zmax = std::max(zmax, std::abs(v));
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!(std::abs(z.data()[i]) > rel_tol * zmax))
            throw SingularityError("full_recovery: base-matrix spectrum vanishes at (" + std::to_string(i / n) +
                                   "," + std::to_string(i % n) + ")");

    ComplexMatrix x = dft2(g);
    for (std::size_t i = 0; i < x.size(); ++i)
        x.data()[i] /= z.data()[i];
    return x;
}

} // namespace ccsbeam
