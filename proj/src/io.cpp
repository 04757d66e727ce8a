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

#include "ccsbeam/io.hpp"
#include "ccsbeam/eval.hpp"
#include "ccsbeam/rng.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ccsbeam
{

namespace
{
constexpr const char *magic_prefix = "ccsbeam-";
constexpr int format_version = 1;

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Little-endian primitives, independent of host byte order.
void put_u64(std::ostream &os, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char *>(b), 8);
}

void put_f64(std::ostream &os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

void put_u32(std::ostream &os, std::uint32_t v)
{
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char *>(b), 4);
}

void read_exact(std::istream &is, unsigned char *dst, std::size_t count)
{
    is.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(is.gcount()) != count)
        throw DataError("payload truncated");
}

std::uint64_t get_u64(std::istream &is)
{
    unsigned char b[8];
    read_exact(is, b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream &is) { return std::bit_cast<double>(get_u64(is)); }

std::uint32_t get_u32(std::istream &is)
{
    unsigned char b[4];
    read_exact(is, b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::size_t to_size(const Manifest &m, const std::string &key)
{
    const std::string &v = m.get(key);
    try
    {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return static_cast<std::size_t>(x);
    }
    catch (const std::logic_error &)
    {
        throw DataError("manifest key '" + key + "' is not an unsigned integer: '" + v + "'");
    }
}

double to_double(const Manifest &m, const std::string &key)
{
    const std::string &v = m.get(key);
    try
    {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    }
    catch (const std::logic_error &)
    {
        throw DataError("manifest key '" + key + "' is not a number: '" + v + "'");
    }
}

void expect_end(std::istream &is)
{
    if (is.peek() != std::char_traits<char>::eof())
        throw DataError("trailing bytes after payload");
}

void merge_extra(Manifest &m, const Manifest &extra)
{
    for (const auto &[k, v] : extra.entries())
        if (!m.has(k))
            m.set(k, v);
}

std::vector<std::size_t> parse_dims(const std::string &s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
        try
        {
            out.push_back(static_cast<std::size_t>(std::stoull(trim(tok))));
        }
        catch (const std::logic_error &)
        {
            throw DataError("bad layer dimension list '" + s + "'");
        }
    }
    return out;
}
} // namespace

// ------------------------------------------------------------------------

void Manifest::set(const std::string &key, const std::string &value)
{
    for (auto &[k, v] : entries_)
        if (k == key)
        {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

bool Manifest::has(const std::string &key) const
{
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto &e) { return e.first == key; });
}

const std::string &Manifest::get(const std::string &key) const
{
    for (const auto &[k, v] : entries_)
        if (k == key)
            return v;
    throw DataError("manifest is missing key '" + key + "'");
}

std::string Manifest::get_or(const std::string &key, const std::string &fallback) const
{
    return has(key) ? get(key) : fallback;
}

void Manifest::set_block(const std::string &name, const std::string &text)
{
    for (auto &[k, v] : blocks_)
        if (k == name)
        {
            v = text;
            return;
        }
    blocks_.emplace_back(name, text);
}

bool Manifest::has_block(const std::string &name) const
{
    return std::any_of(blocks_.begin(), blocks_.end(), [&](const auto &e) { return e.first == name; });
}

const std::string &Manifest::block(const std::string &name) const
{
    for (const auto &[k, v] : blocks_)
        if (k == name)
            return v;
    throw DataError("manifest is missing block '" + name + "'");
}

void Manifest::write(std::ostream &os) const
{
    os << magic_prefix << kind_ << '\n';
    for (const auto &[k, v] : entries_)
        os << k << " = " << v << '\n';
    for (const auto &[k, v] : blocks_)
    {
        os << "begin " << k << '\n' << v;
        if (!v.empty() && v.back() != '\n')
            os << '\n';
        os << "end " << k << '\n';
    }
    os << "end_manifest\n";
}

Manifest Manifest::read(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind(magic_prefix, 0) != 0)
        throw DataError("not a ccsbeam artifact (missing header line)");
    Manifest m(line.substr(std::strlen(magic_prefix)));
    while (std::getline(is, line))
    {
        if (line == "end_manifest")
            return m;
        if (line.rfind("begin ", 0) == 0)
        {
            const std::string name = line.substr(6);
            std::string text, inner;
            bool closed = false;
            while (std::getline(is, inner))
            {
                if (inner == "end " + name)
                {
                    closed = true;
                    break;
                }
                text += inner + '\n';
            }
            if (!closed)
                throw DataError("manifest block '" + name + "' is not closed");
            m.set_block(name, text);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("malformed manifest line '" + line + "'");
        m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    throw DataError("manifest is not terminated");
}

// ------------------------------------------------------------------------
// Datasets

void write_dataset(std::ostream &os, const Dataset &data, const Manifest &extra)
{
    Manifest m("dataset");
    m.set("version", std::to_string(format_version));
    m.set("n", std::to_string(data.n));
    m.set("kind", to_string(data.kind));
    m.set("count", std::to_string(data.samples.size()));
    m.set("n_sc", std::to_string(data.n_sc));
    m.set("seed", std::to_string(data.seed));
    m.set("normalization", data.normalization);
    merge_extra(m, extra);
    m.write(os);

    for (const auto &s : data.samples)
    {
        if (s.slices.size() != data.n_sc)
            throw DataError("sample slice count does not match n_sc");
        for (const auto &h : s.slices)
        {
            if (h.rows() != data.n || h.cols() != data.n)
                throw DataError("sample slice is not N x N");
            for (const cplx &v : h.data())
            {
                put_f64(os, v.real());
                put_f64(os, v.imag());
            }
        }
    }
    for (const auto &s : data.samples)
        put_u32(os, static_cast<std::uint32_t>(s.label.flat(data.n)));
    for (const auto &s : data.samples)
        os.put(s.los ? 1 : 0);
    if (!os)
        throw DataError("write failed");
}

Dataset read_dataset(std::istream &is, Manifest *manifest)
{
    Manifest m = Manifest::read(is);
    if (m.kind() != "dataset")
        throw DataError("expected a dataset file, found '" + m.kind() + "'");
    if (to_size(m, "version") != format_version)
        throw DataError("unsupported dataset version " + m.get("version"));
    Dataset d;
    d.n = to_size(m, "n");
    try
    {
        d.kind = dataset_kind_from_string(m.get("kind"));
    }
    catch (const std::invalid_argument &e)
    {
        throw DataError(e.what());
    }
    d.n_sc = to_size(m, "n_sc");
    d.seed = static_cast<std::uint64_t>(std::stoull(m.get("seed")));
    d.normalization = m.get("normalization");
    const std::size_t count = to_size(m, "count");
    if (d.n == 0 || d.n_sc == 0)
        throw DataError("dataset has zero N or N_sc");

    d.samples.resize(count);
    for (auto &s : d.samples)
    {
        s.slices.assign(d.n_sc, ComplexMatrix::square(d.n));
        for (auto &h : s.slices)
            for (cplx &v : h.data())
            {
                const double re = get_f64(is);
                const double im = get_f64(is);
                v = {re, im};
            }
    }
    for (auto &s : d.samples)
    {
        const std::uint32_t idx = get_u32(is);
        if (idx >= d.n * d.n)
            throw DataError("label index " + std::to_string(idx) + " outside the codebook");
        s.label = BeamIndex::from_flat(idx, d.n);
    }
    for (auto &s : d.samples)
    {
        unsigned char b = 0;
        read_exact(is, &b, 1);
        if (b > 1)
            throw DataError("LOS flag must be 0 or 1");
        s.los = b == 1;
    }
    expect_end(is);
    if (manifest)
        *manifest = std::move(m);
    return d;
}

void save_dataset(const std::filesystem::path &path, const Dataset &data, const Manifest &extra)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw DataError("cannot open '" + path.string() + "' for writing");
    write_dataset(os, data, extra);
}

Dataset load_dataset(const std::filesystem::path &path, Manifest *manifest)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw DataError("cannot open dataset '" + path.string() + "'");
    return read_dataset(is, manifest);
}

// ------------------------------------------------------------------------
// Models

void write_model(std::ostream &os, const ModelParams &params, const Manifest &extra)
{
    params.validate();
    Manifest m("model");
    m.set("version", std::to_string(format_version));
    m.set("n", std::to_string(params.n));
    m.set("m", std::to_string(params.m()));
    m.set("q", params.resolution.to_string());
    m.set("stage", std::to_string(params.stage));
    m.set("n_sc", std::to_string(params.n_sc));
    m.set("wideband", params.wideband() ? "1" : "0");
    std::string dims = std::to_string(params.input_dim());
    for (const auto &w : params.fc)
        dims += "," + std::to_string(w.rows());
    m.set("fc_dims", dims);
    m.set("omega_conv", exact(params.omega_conv));
    m.set("seed", std::to_string(params.seed));
    m.set_block("omega", params.omega.to_text());
    merge_extra(m, extra);
    m.write(os);

    for (const cplx &v : params.filter.data())
        put_f64(os, v.real());
    for (const cplx &v : params.filter.data())
        put_f64(os, v.imag());
    for (const auto &w : params.fc)
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                put_f64(os, w(r, c));
    if (params.wideband())
        for (double p : params.subcarrier_amplitudes())
            put_f64(os, p);
    if (!os)
        throw DataError("write failed");
}

ModelParams read_model(std::istream &is, Manifest *manifest)
{
    Manifest m = Manifest::read(is);
    if (m.kind() != "model")
        throw DataError("expected a model file, found '" + m.kind() + "'");
    if (to_size(m, "version") != format_version)
        throw DataError("unsupported model version " + m.get("version"));
    ModelParams p;
    p.n = to_size(m, "n");
    const std::size_t mm = to_size(m, "m");
    try
    {
        p.resolution = PhaseResolution::parse(m.get("q"));
        p.omega = SubsamplingSet::from_text(p.n, m.block("omega"));
    }
    catch (const std::logic_error &e)
    {
        throw DataError(std::string("model manifest: ") + e.what());
    }
    if (p.omega.size() != mm)
        throw DataError("model Omega has " + std::to_string(p.omega.size()) + " shifts, manifest says M=" +
                        std::to_string(mm));
    p.stage = static_cast<int>(to_size(m, "stage"));
    p.n_sc = to_size(m, "n_sc");
    const bool wideband = m.get("wideband") == "1";
    p.omega_conv = to_double(m, "omega_conv");
    p.seed = static_cast<std::uint64_t>(std::stoull(m.get("seed")));
    const auto dims = parse_dims(m.get("fc_dims"));
    if (dims.size() < 2 || dims.front() != 2 * mm * p.n_sc || dims.back() != p.n * p.n)
        throw DataError("model layer dimensions '" + m.get("fc_dims") + "' are inconsistent");

    p.filter = ComplexMatrix::square(p.n);
    for (cplx &v : p.filter.data())
        v.real(get_f64(is));
    for (cplx &v : p.filter.data())
        v.imag(get_f64(is));
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    {
        Eigen::MatrixXd w(dims[l + 1], dims[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                w(r, c) = get_f64(is);
        p.fc.push_back(std::move(w));
    }
    if (wideband)
    {
        p.power_weights.resize(mm * p.n_sc);
        for (std::size_t s = 0; s < p.n_sc; ++s)
        {
            const double v = get_f64(is);
            std::fill_n(p.power_weights.begin() + static_cast<std::ptrdiff_t>(s * mm), mm, v);
        }
    }
    expect_end(is);
    try
    {
        p.validate();
    }
    catch (const DimensionError &e)
    {
        throw DataError(std::string("model file: ") + e.what());
    }
    if (manifest)
        *manifest = std::move(m);
    return p;
}

void save_model(const std::filesystem::path &path, const ModelParams &params, const Manifest &extra)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw DataError("cannot open '" + path.string() + "' for writing");
    write_model(os, params, extra);
}

ModelParams load_model(const std::filesystem::path &path, Manifest *manifest)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw DataError("cannot open model '" + path.string() + "'");
    return read_model(is, manifest);
}

// ------------------------------------------------------------------------

std::uint64_t file_hash(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw DataError("cannot open '" + path.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::vector<unsigned char> buf(1 << 16);
    while (is)
    {
        is.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
        h = fnv1a({buf.data(), static_cast<std::size_t>(is.gcount())}, h);
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t filter_hash(const ComplexMatrix &filter)
{
    std::ostringstream os;
    for (const cplx &v : filter.data())
        put_f64(os, v.real());
    for (const cplx &v : filter.data())
        put_f64(os, v.imag());
    const std::string s = os.str();
    return fnv1a({reinterpret_cast<const unsigned char *>(s.data()), s.size()});
}

void write_matrix_csv(std::ostream &os, const RealMatrix &m)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
    {
        for (std::size_t c = 0; c < m.cols(); ++c)
            os << (c ? "," : "") << format_g6(m(r, c));
        os << '\n';
    }
}

} // namespace ccsbeam
