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

#include "ccsbeam/baseline.hpp"
#include "ccsbeam/rng.hpp"

#include <cmath>
#include <numbers>

namespace ccsbeam
{

void OmpConfig::validate() const
{
    if (sparsity < 1)
        throw std::invalid_argument("OMP sparsity K must be >= 1");
    if (!(residual_tolerance >= 0.0))
        throw std::invalid_argument("OMP residual tolerance must be >= 0");
}

BaseMatrix random_phase_matrix(std::size_t n, const PhaseResolution &resolution, std::uint64_t seed)
{
    BaseMatrix out{ComplexMatrix::square(n), resolution};
    CounterRng rng(seed, {0xba5e11eULL, n});
    const double two_pi = 2.0 * std::numbers::pi;
    for (auto &v : out.p.data())
    {
        if (resolution.finite())
        {
            const std::uint64_t levels = std::uint64_t{1} << *resolution.bits;
            const auto k = rng.below(levels);
            v = std::polar(1.0, two_pi * static_cast<double>(k) / static_cast<double>(levels));
        }
        else
            v = std::polar(1.0, rng.uniform(0.0, two_pi));
    }
    return out;
}

Eigen::MatrixXcd omp_dictionary(const ComplexMatrix &p, const SubsamplingSet &omega)
{
    if (!p.is_square() || p.rows() != omega.n())
        throw DimensionError("omp_dictionary: base matrix and subsampling set disagree on N");
    const std::size_t n = p.rows();
    Eigen::MatrixXcd a(omega.size(), n * n);
    for (std::size_t m = 0; m < omega.size(); ++m)
    {
        const ComplexMatrix d = dft2(circ_shift(p, omega[m].row, omega[m].col));
        for (std::size_t i = 0; i < n * n; ++i)
            a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) = std::conj(d.data()[i]);
    }
    return a;
}

OmpResult omp_solve(std::span<const cplx> y, const Eigen::MatrixXcd &dictionary, std::size_t n,
                    const OmpConfig &cfg)
{
    cfg.validate();
    const auto m = static_cast<std::size_t>(dictionary.rows());
    if (y.size() != m)
        throw DimensionError("omp: measurement length does not match the dictionary");
    if (static_cast<std::size_t>(dictionary.cols()) != n * n)
        throw DimensionError("omp: dictionary must have N^2 atoms");
    if (cfg.sparsity > m)
        throw std::invalid_argument("omp: sparsity K=" + std::to_string(cfg.sparsity) + " exceeds M=" +
                                    std::to_string(m));

    OmpResult out;
    const Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(m));
    const double y2 = yv.squaredNorm();
    if (y2 == 0.0)
    {
        out.degenerate = true;
        return out;
    }

    const Eigen::VectorXd col_norm = dictionary.colwise().norm().transpose();
    Eigen::VectorXcd residual = yv;
    Eigen::VectorXcd coef;
    std::vector<bool> used(n * n, false);
    for (std::size_t it = 0; it < cfg.sparsity; ++it)
    {
        const Eigen::VectorXcd corr = dictionary.adjoint() * residual;
        std::size_t best = n * n;
        double best_val = -1.0;
        for (std::size_t j = 0; j < n * n; ++j)
        {
            const double cn = col_norm(static_cast<Eigen::Index>(j));
            if (used[j] || cn == 0.0)
                continue;
            const double v = std::abs(corr(static_cast<Eigen::Index>(j))) / cn;
            if (v > best_val)
            {
                best_val = v;
                best = j;
            }
        }
        if (best == n * n)
            break;
        used[best] = true;
        out.support.push_back(best);

        Eigen::MatrixXcd sub(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(out.support.size()));
        for (std::size_t k = 0; k < out.support.size(); ++k)
            sub.col(static_cast<Eigen::Index>(k)) = dictionary.col(static_cast<Eigen::Index>(out.support[k]));
        // Normal equations, pivoted solve.
        const Eigen::MatrixXcd gram = sub.adjoint() * sub;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(gram);
        qr.setThreshold(1e-10);
        coef = qr.solve(sub.adjoint() * yv);
        residual = yv - sub * coef;
        if (residual.squaredNorm() <= cfg.residual_tolerance * y2)
            break;
    }

    out.coefficients.assign(coef.data(), coef.data() + coef.size());
    std::size_t arg = 0;
    for (std::size_t k = 1; k < out.coefficients.size(); ++k)
        if (std::abs(out.coefficients[k]) > std::abs(out.coefficients[arg]))
            arg = k;
    if (out.support.empty())
        out.degenerate = true;
    else
        out.beam = BeamIndex::from_flat(out.support[arg], n);
    return out;
}

BeamIndex omp_predict(const Measurement &y, const BaseMatrix &p, const SubsamplingSet &omega, const OmpConfig &cfg)
{
    return omp_solve(y.y, omp_dictionary(p.p, omega), p.n(), cfg).beam;
}

BeamIndex exhaustive_best(const ComplexMatrix &h)
{
    return best_beam_label(h);
}

} // namespace ccsbeam
