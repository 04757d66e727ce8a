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

// Artifact files.
//
// Every file starts with a text manifest:
//
//   ccsbeam-<kind>
//   key = value
//   ...
//   begin <block>        (optional raw text blocks, e.g. the Omega list)
//   r,c
//   end <block>
//   end_manifest
//
// followed, for datasets and models, by a little-endian binary payload.
// Dataset payload: per sample and slice, N*N complex entries as interleaved
// f64 (re, im) row-major; then `count` u32 labels i*N+j; then `count` u8 LOS flags.
// Model payload: P_R, P_I (row-major f64), each FC matrix row-major, then p_s.

#pragma once

#include "ccsbeam/channel.hpp"
#include "ccsbeam/network.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ccsbeam
{

class Manifest
{
public:
    explicit Manifest(std::string kind = {}) : kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

    /// Insert or overwrite, keeping first-insertion order.
    void set(const std::string &key, const std::string &value);
    bool has(const std::string &key) const;
    /// Throws DataError when missing.
    const std::string &get(const std::string &key) const;
    std::string get_or(const std::string &key, const std::string &fallback) const;
    const std::vector<std::pair<std::string, std::string>> &entries() const noexcept { return entries_; }

    void set_block(const std::string &name, const std::string &text);
    const std::string &block(const std::string &name) const;
    bool has_block(const std::string &name) const;

    void write(std::ostream &os) const;
    /// Reads through `end_manifest`; the stream is left at the payload.
    static Manifest read(std::istream &is);

private:
    std::string kind_;
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<std::pair<std::string, std::string>> blocks_;
};

struct Dataset
{
    DatasetKind kind = DatasetKind::narrowband;
    std::size_t n = 0;
    std::size_t n_sc = 1;
    std::uint64_t seed = 0;
    std::string normalization = "none";
    std::vector<ChannelSample> samples;
};

/// Writes manifest (with `extra` entries appended, e.g. the config echo) and payload.
void save_dataset(const std::filesystem::path &path, const Dataset &data, const Manifest &extra = Manifest());
Dataset load_dataset(const std::filesystem::path &path, Manifest *manifest = nullptr);

void save_model(const std::filesystem::path &path, const ModelParams &params, const Manifest &extra = Manifest());
ModelParams load_model(const std::filesystem::path &path, Manifest *manifest = nullptr);

/// Stream forms (used by tests and hashing).
void write_dataset(std::ostream &os, const Dataset &data, const Manifest &extra = Manifest());
Dataset read_dataset(std::istream &is, Manifest *manifest = nullptr);
void write_model(std::ostream &os, const ModelParams &params, const Manifest &extra = Manifest());
ModelParams read_model(std::istream &is, Manifest *manifest = nullptr);

/// FNV-1a of a file's bytes.
std::uint64_t file_hash(const std::filesystem::path &path);
std::string hex64(std::uint64_t v);

/// FNV-1a over the raw filter bytes (P_R then P_I as written in the model payload).
std::uint64_t filter_hash(const ComplexMatrix &filter);

/// N x N grid as CSV with %.6g values.
void write_matrix_csv(std::ostream &os, const RealMatrix &m);

} // namespace ccsbeam
