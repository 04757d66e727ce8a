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

#include "ccsbeam/cli.hpp"
#include "ccsbeam/eval.hpp"
#include "ccsbeam/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace ccsbeam
{

namespace
{
std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string canonical_key(std::string k)
{
    std::replace(k.begin(), k.end(), '_', '-');
    return k;
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep))
        if (!trim(tok).empty())
            out.push_back(trim(tok));
    return out;
}

// Keys shown on each command line. `config` is handled separately.
const std::vector<std::string> global_keys{"seed", "out", "threads"};

const std::vector<std::string> gen_keys{
    "n",           "count",      "kind",          "rsu-height",         "rx-height",  "lane-offsets",
    "street-length", "blockage-probability", "max-reflections", "wall-distance", "reflection-loss-db",
    "carrier-hz",  "bandwidth-hz", "taps",        "sample-period",      "subcarrier-stride", "n-sc",
    "pulse",       "rolloff"};

const std::vector<std::string> train_keys{"n",          "data",         "stage",          "from",
                                          "m",          "hidden",       "epochs",         "batch-size",
                                          "learning-rate", "lr-halve-every", "momentum",   "quant-interval",
                                          "bits",       "snr",          "narrowband-view"};

const std::vector<std::string> eval_keys{"n",       "data",        "model",     "snr-grid",  "m-grid",
                                         "methods", "omp-sparsity", "omp-bits", "dump-noise-hashes"};

const std::vector<std::string> mask_keys{"model"};
const std::vector<std::string> prior_keys{"data"};

const std::set<std::string> flag_keys{"narrowband-view", "dump-noise-hashes"};

const std::map<std::string, std::string> defaults{
    // global
    {"seed", "1"},
    {"out", ""},
    {"threads", "1"},
    // scenario
    {"n", "16"},
    {"count", "1000"},
    {"kind", "narrowband"},
    {"rsu-height", "5"},
    {"rx-height", "1.2"},
    {"lane-offsets", "4,7"},
    {"street-length", "100"},
    {"blockage-probability", "0.27"},
    {"max-reflections", "1"},
    {"wall-distance", "10"},
    {"reflection-loss-db", "10"},
    {"carrier-hz", "28e9"},
    {"bandwidth-hz", "100e6"},
    {"taps", "128"},
    {"sample-period", "1e-8"},
    {"subcarrier-stride", "8"},
    {"n-sc", "16"},
    {"pulse", "raised-cosine"},
    {"rolloff", "0.35"},
    // training
    {"data", ""},
    {"stage", "1"},
    {"from", ""},
    {"m", "40"},
    {"hidden", "80,256,512"},
    {"epochs", "300"},
    {"batch-size", "128"},
    {"learning-rate", "1e-3"},
    {"lr-halve-every", "100"},
    {"momentum", "0.9"},
    {"quant-interval", "10"},
    {"bits", "inf"},
    {"snr", "none"},
    {"narrowband-view", "false"},
    // evaluation
    {"model", ""},
    {"snr-grid", "-10:30:5"},
    {"m-grid", ""},
    {"methods", "learned,omp,oracle"},
    {"omp-sparsity", "4"},
    {"omp-bits", "inf"},
    {"dump-noise-hashes", "false"},
};

[[noreturn]] void bad_value(const std::string &key, const std::string &value, const std::string &what)
{
    throw UsageError("--" + key + ": '" + value + "' is not " + what);
}

Manifest echo(const std::string &command, const std::vector<std::string> &keys, const RunConfig &cfg)
{
    Manifest m;
    m.set("command", command);
    for (const auto &k : global_keys)
        if (k != "out")
            m.set("cfg." + k, cfg.get(k));
    for (const auto &k : keys)
        m.set("cfg." + k, cfg.get(k));
    return m;
}

std::string require_path(const RunConfig &cfg, const std::string &key)
{
    const std::string &p = cfg.get(key);
    if (p.empty())
        throw UsageError("--" + key + " is required");
    return p;
}

void write_sidecar(const std::string &out_path, const Manifest &m)
{
    Manifest full("report");
    for (const auto &[k, v] : m.entries())
        full.set(k, v);
    std::ofstream os(out_path + ".manifest", std::ios::binary | std::ios::trunc);
    if (!os)
        throw DataError("cannot write '" + out_path + ".manifest'");
    full.write(os);
}

// Writes `body` to --out (plus a sidecar manifest) or to `out`.
void emit_text(const RunConfig &cfg, const std::string &body, const Manifest &m, std::ostream &out)
{
    const std::string &path = cfg.get("out");
    if (path.empty())
    {
        out << body;
        return;
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw DataError("cannot open '" + path + "' for writing");
    os << body;
    if (!os)
        throw DataError("write to '" + path + "' failed");
    write_sidecar(path, m);
}

PhaseResolution resolution_of(const RunConfig &cfg, const std::string &key)
{
    try
    {
        return PhaseResolution::parse(cfg.get(key));
    }
    catch (const std::logic_error &)
    {
        bad_value(key, cfg.get(key), "a bit count in [1,30] or 'inf'");
    }
}

// ------------------------------------------------------------------------

int cmd_gen(const RunConfig &cfg, std::ostream &out)
{
    const long long count = cfg.get_int("count");
    if (count <= 0)
        throw UsageError("--count must be positive");
    ScenarioConfig sc;
    sc.n = cfg.get_size("n");
    sc.rsu_height = cfg.get_double("rsu-height");
    sc.rx_height = cfg.get_double("rx-height");
    sc.lane_offsets = cfg.get_doubles("lane-offsets");
    sc.street_length = cfg.get_double("street-length");
    sc.blockage_probability = cfg.get_double("blockage-probability");
    sc.max_reflections = static_cast<int>(cfg.get_int("max-reflections"));
    sc.wall_distance = cfg.get_double("wall-distance");
    sc.reflection_loss_db = cfg.get_double("reflection-loss-db");
    sc.carrier_hz = cfg.get_double("carrier-hz");
    sc.bandwidth_hz = cfg.get_double("bandwidth-hz");
    sc.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));

    Dataset d;
    d.n = sc.n;
    d.seed = sc.seed;
    try
    {
        d.kind = dataset_kind_from_string(cfg.get("kind"));
    }
    catch (const DataError &)
    {
        bad_value("kind", cfg.get("kind"), "'narrowband' or 'wideband'");
    }
    if (d.kind == DatasetKind::wideband)
    {
        WidebandConfig w;
        w.taps = cfg.get_size("taps");
        w.sample_period = cfg.get_double("sample-period");
        w.subcarrier_stride = cfg.get_size("subcarrier-stride");
        w.n_sc = cfg.get_size("n-sc");
        const std::string &pulse = cfg.get("pulse");
        if (pulse == "raised-cosine")
            w.pulse = PulseShape::raised_cosine;
        else if (pulse == "ideal")
            w.pulse = PulseShape::ideal;
        else
            bad_value("pulse", pulse, "'raised-cosine' or 'ideal'");
        w.rolloff = cfg.get_double("rolloff");
        w.nt = sc.n * sc.n;
        w.nr = 1;
        d.n_sc = w.n_sc;
        d.samples = gen_wideband_scenario(sc, w, count);
    }
    else
        d.samples = gen_scenario(sc, count);

    const std::string path = require_path(cfg, "out");
    save_dataset(path, d, echo("gen", gen_keys, cfg));

    std::size_t los = 0;
    for (const auto &s : d.samples)
        los += s.los;
    const RealMatrix prior = beamspace_prior(d.samples);
    const double thr = 1.0 / (10.0 * static_cast<double>(d.n * d.n));
    out << "samples " << d.samples.size() << '\n'
        << "los_fraction " << format_g6(static_cast<double>(los) / static_cast<double>(d.samples.size())) << '\n'
        << "prior_support " << prior_support_size(prior, thr) << " of " << d.n * d.n << '\n';
    return exit_ok;
}

std::vector<ChannelSample> first_slice_view(const std::vector<ChannelSample> &samples)
{
    std::vector<ChannelSample> out;
    out.reserve(samples.size());
    for (const auto &s : samples)
        out.push_back({{s.slices.front()}, s.label, s.los});
    return out;
}

int cmd_train(const RunConfig &cfg, std::ostream &out)
{
    const long long stage = cfg.get_int("stage");
    if (stage != 1 && stage != 2)
        bad_value("stage", cfg.get("stage"), "1 or 2");
    const std::string data_path = require_path(cfg, "data");
    const std::string out_path = require_path(cfg, "out");

    Dataset data = load_dataset(data_path);
    if (data.n != cfg.get_size("n"))
        throw DataError("dataset has N=" + std::to_string(data.n) + " but the configuration says N=" +
                        cfg.get("n"));
    std::vector<ChannelSample> samples = std::move(data.samples);
    std::size_t n_sc = data.n_sc;
    if (cfg.get_bool("narrowband-view") && n_sc > 1)
    {
        samples = first_slice_view(samples);
        n_sc = 1;
    }

    TrainConfig tc;
    tc.epochs = cfg.get_size("epochs");
    tc.batch_size = cfg.get_size("batch-size");
    tc.learning_rate = cfg.get_double("learning-rate");
    tc.lr_halve_every = cfg.get_size("lr-halve-every");
    tc.momentum = cfg.get_double("momentum");
    tc.quant_interval = cfg.get_size("quant-interval");
    tc.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    if (cfg.get("snr") != "none")
        tc.snr_db = cfg.get_double("snr");
    try
    {
        tc.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw UsageError(e.what());
    }

    Manifest m = echo("train", train_keys, cfg);
    m.set("input.data", hex64(file_hash(data_path)));
    auto log_epoch = [&](std::size_t epoch, double loss) {
        out << "stage " << stage << " epoch " << epoch + 1 << '/' << tc.epochs << " loss " << format_g6(loss)
            << '\n';
    };

    ModelParams model;
    TrainLog log;
    if (stage == 1)
    {
        if (tc.epochs == 0)
            throw UsageError("--epochs must be >= 1 for stage 1");
        ModelSpec spec;
        spec.n = data.n;
        spec.m = cfg.get_size("m");
        spec.hidden = cfg.get_sizes("hidden");
        spec.n_sc = n_sc;
        spec.wideband = n_sc > 1;
        spec.resolution = resolution_of(cfg, "bits");
        spec.seed = tc.seed;
        if (spec.m < 1 || spec.m > spec.n * spec.n)
            bad_value("m", cfg.get("m"), "in [1, N^2]");
        model = train_stage1(normalize_stage1(std::move(samples)), tc, init_model(spec), &log, log_epoch);
    }
    else
    {
        const std::string &from = cfg.get("from");
        if (from.empty())
            throw DataError("stage 2 needs --from <stage-1 model>");
        const ModelParams s1 = load_model(from);
        if (s1.stage != 1)
            throw DataError("'" + from + "' is not a stage-1 model");
        m.set("input.from", hex64(file_hash(from)));
        model = train_stage2(normalize_eval(std::move(samples)), tc, s1, &log, log_epoch);
    }
    if (log.clamped > 0)
        out << "loss clamped " << log.clamped << " times\n";
    save_model(out_path, model, m);
    out << "filter_hash " << hex64(filter_hash(model.filter)) << '\n';
    return exit_ok;
}

std::string method_label(const ModelParams &p)
{
    return std::string("ccs") + (p.wideband() ? "-wb" : "") + "-q" + p.resolution.to_string();
}

int cmd_eval(const RunConfig &cfg, std::ostream &out)
{
    const std::string data_path = require_path(cfg, "data");
    Dataset data = load_dataset(data_path);
    if (data.n != cfg.get_size("n"))
        throw DataError("dataset has N=" + std::to_string(data.n) + " but the configuration says N=" +
                        cfg.get("n"));
    const auto samples = normalize_eval(std::move(data.samples));

    SweepConfig sw;
    sw.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    sw.snr_db = parse_grid(cfg.get("snr-grid"));
    if (sw.snr_db.empty())
        throw UsageError("--snr-grid is empty");
    sw.omp.sparsity = cfg.get_size("omp-sparsity");
    sw.omp_resolution = resolution_of(cfg, "omp-bits");

    Manifest m = echo("eval", eval_keys, cfg);
    m.set("input.data", hex64(file_hash(data_path)));

    // Learned models, grouped by method label and indexed by M.
    std::vector<ModelParams> models;
    std::vector<std::string> labels;
    for (const auto &spec : split(cfg.get("model"), ','))
    {
        std::string label, path = spec;
        if (const auto eq = spec.find('='); eq != std::string::npos)
        {
            label = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        }
        models.push_back(load_model(path));
        labels.push_back(label.empty() ? method_label(models.back()) : label);
        m.set("input.model." + std::to_string(models.size()), hex64(file_hash(path)));
    }

    std::vector<Method> methods;
    std::set<std::size_t> m_seen;
    for (const auto &name : split(cfg.get("methods"), ','))
    {
        if (name == "learned")
        {
            for (std::size_t i = 0; i < models.size(); ++i)
            {
                auto it = std::find_if(methods.begin(), methods.end(),
                                       [&](const Method &x) { return x.name == labels[i]; });
                if (it == methods.end())
                {
                    methods.push_back({labels[i], MethodKind::learned, {}, false});
                    it = methods.end() - 1;
                }
                const ModelParams &mp = models[i];
                if (!it->models.emplace(mp.m(), &mp).second)
                    throw UsageError("two models for method '" + labels[i] + "' at M=" + std::to_string(mp.m()));
                if (mp.n_sc == 1 && data.n_sc > 1)
                    it->first_slice_only = true;
                else if (mp.n_sc != data.n_sc)
                    throw DataError("model '" + labels[i] + "' expects N_sc=" + std::to_string(mp.n_sc) +
                                    ", dataset has " + std::to_string(data.n_sc));
                m_seen.insert(mp.m());
            }
        }
        else if (name == "omp")
            methods.push_back({"omp", MethodKind::omp, {}, false});
        else if (name == "oracle")
            methods.push_back({"oracle", MethodKind::oracle, {}, false});
        else
            bad_value("methods", name, "one of learned, omp, oracle");
    }
    if (methods.empty())
        throw UsageError("--methods selects nothing");

    if (!cfg.get("m-grid").empty())
        sw.m_grid = cfg.get_sizes("m-grid");
    else
        sw.m_grid.assign(m_seen.begin(), m_seen.end());
    if (sw.m_grid.empty())
        throw UsageError("--m-grid is empty and no model supplies M");

    const EvalReport report = sweep(samples, methods, sw);
    if (cfg.get_bool("dump-noise-hashes"))
        for (const auto &r : report.rows)
            if (r.method != "oracle")
                out << "noise snr=" << format_g6(r.snr_db) << " m=" << r.m << " method=" << r.method
                    << " hash=" << hex64(r.noise_hash) << '\n';
    std::ostringstream csv;
    write_csv(csv, report);
    emit_text(cfg, csv.str(), m, out);
    return exit_ok;
}

int cmd_export_mask(const RunConfig &cfg, std::ostream &out)
{
    const std::string path = require_path(cfg, "model");
    const ModelParams p = load_model(path);
    Manifest m = echo("export-mask", mask_keys, cfg);
    m.set("input.model", hex64(file_hash(path)));
    std::ostringstream csv;
    write_matrix_csv(csv, mask(p.exported_base_matrix()));
    emit_text(cfg, csv.str(), m, out);
    return exit_ok;
}

int cmd_prior(const RunConfig &cfg, std::ostream &out)
{
    const std::string path = require_path(cfg, "data");
    const Dataset d = load_dataset(path);
    Manifest m = echo("prior", prior_keys, cfg);
    m.set("input.data", hex64(file_hash(path)));
    std::ostringstream csv;
    write_matrix_csv(csv, beamspace_prior(d.samples));
    emit_text(cfg, csv.str(), m, out);
    return exit_ok;
}

std::string read_file(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw UsageError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}
} // namespace

// ------------------------------------------------------------------------

const std::map<std::string, std::string> &config_defaults()
{
    return defaults;
}

std::map<std::string, std::string> parse_config_text(const std::string &text)
{
    std::map<std::string, std::string> out;
    std::vector<std::string> unknown;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = canonical_key(trim(line.substr(0, eq)));
        if (!defaults.contains(key))
        {
            unknown.push_back(key);
            continue;
        }
        out[key] = trim(line.substr(eq + 1));
    }
    if (!unknown.empty())
    {
        std::string msg = "unknown config keys:";
        for (const auto &k : unknown)
            msg += " " + k;
        throw UsageError(msg);
    }
    return out;
}

RunConfig resolve_config(const std::map<std::string, std::string> &file,
                         const std::map<std::string, std::string> &flags)
{
    std::map<std::string, std::string> v = defaults;
    for (const auto *layer : {&file, &flags})
        for (const auto &[k, val] : *layer)
        {
            const std::string key = canonical_key(k);
            if (!v.contains(key))
                throw UsageError("unknown config key: " + key);
            v[key] = val;
        }
    return RunConfig(std::move(v));
}

const std::string &RunConfig::get(const std::string &key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw UsageError("unknown config key: " + key);
    return it->second;
}

double RunConfig::get_double(const std::string &key) const
{
    const std::string &s = get(key);
    try
    {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size() && std::isfinite(v))
            return v;
    }
    catch (const std::logic_error &)
    {
    }
    bad_value(key, s, "a finite number");
}

long long RunConfig::get_int(const std::string &key) const
{
    const std::string &s = get(key);
    try
    {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos == s.size())
            return v;
    }
    catch (const std::logic_error &)
    {
    }
    bad_value(key, s, "an integer");
}

std::size_t RunConfig::get_size(const std::string &key) const
{
    const long long v = get_int(key);
    if (v < 0)
        bad_value(key, get(key), "a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool RunConfig::get_bool(const std::string &key) const
{
    const std::string &s = get(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off" || s.empty())
        return false;
    bad_value(key, s, "a boolean");
}

std::vector<double> RunConfig::get_doubles(const std::string &key) const
{
    std::vector<double> out;
    for (const auto &tok : split(get(key), ','))
    {
        try
        {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos == tok.size() && std::isfinite(v))
            {
                out.push_back(v);
                continue;
            }
        }
        catch (const std::logic_error &)
        {
        }
        bad_value(key, get(key), "a comma-separated list of numbers");
    }
    return out;
}

std::vector<std::size_t> RunConfig::get_sizes(const std::string &key) const
{
    std::vector<std::size_t> out;
    for (const auto &tok : split(get(key), ','))
    {
        try
        {
            std::size_t pos = 0;
            const long long v = std::stoll(tok, &pos);
            if (pos == tok.size() && v >= 0)
            {
                out.push_back(static_cast<std::size_t>(v));
                continue;
            }
        }
        catch (const std::logic_error &)
        {
        }
        bad_value(key, get(key), "a comma-separated list of non-negative integers");
    }
    return out;
}

std::vector<double> parse_grid(const std::string &text)
{
    const std::string t = trim(text);
    if (t.empty())
        return {};
    if (t.find(':') == std::string::npos)
        return RunConfig({{"grid", t}}).get_doubles("grid");
    const auto parts = split(t, ':');
    if (parts.size() != 3)
        throw UsageError("grid '" + text + "' must be 'lo:hi:step'");
    double lo = 0, hi = 0, step = 0;
    try
    {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        step = std::stod(parts[2]);
    }
    catch (const std::logic_error &)
    {
        throw UsageError("grid '" + text + "' has a non-numeric bound");
    }
    if (!(step > 0.0) || hi < lo)
        throw UsageError("grid '" + text + "' needs step > 0 and hi >= lo");
    std::vector<double> out;
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= count; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Convolutional compressive beam alignment toolkit", "ccsbeam"};
    app.require_subcommand(1);

    std::map<std::string, std::string> store;
    std::map<std::string, std::vector<std::string>> multi;
    std::string config_path;
    std::map<std::string, std::vector<std::pair<std::string, CLI::Option *>>> options;

    auto add_command = [&](const std::string &name, const std::string &help, const std::vector<std::string> &keys) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "config file with key = value lines");
        std::vector<std::string> all = global_keys;
        all.insert(all.end(), keys.begin(), keys.end());
        for (const auto &k : all)
        {
            CLI::Option *opt = nullptr;
            if (flag_keys.contains(k))
                opt = sub->add_flag("--" + k)->description("default: " + defaults.at(k));
            else if (k == "model")
                opt = sub->add_option("--" + k, multi[name], "model file ([label=]path), repeatable");
            else
                opt = sub->add_option("--" + k, store[name + "/" + k], "default: " + defaults.at(k));
            options[name].emplace_back(k, opt);
        }
        return sub;
    };
    add_command("gen", "generate a synthetic channel dataset", gen_keys);
    add_command("train", "train a model (stage 1 or stage 2)", train_keys);
    add_command("eval", "SNR x M alignment sweep, CSV report", eval_keys);
    add_command("export-mask", "write |N dft2(P)| of a model as CSV", mask_keys);
    add_command("prior", "write the empirical beamspace prior as CSV", prior_keys);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try
    {
        std::map<std::string, std::string> flags;
        for (const auto &[k, opt] : options[command])
        {
            if (opt->count() == 0)
                continue;
            if (flag_keys.contains(k))
                flags[k] = "true";
            else if (k == "model")
            {
                std::string joined;
                for (const auto &p : multi[command])
                    joined += (joined.empty() ? "" : ",") + p;
                flags[k] = joined;
            }
            else
                flags[k] = store[command + "/" + k];
        }
        const auto file = config_path.empty() ? std::map<std::string, std::string>{}
                                              : parse_config_text(read_file(config_path));
        const RunConfig cfg = resolve_config(file, flags);
        if (cfg.get_size("threads") < 1)
            throw UsageError("--threads must be >= 1");

        if (command == "gen")
            return cmd_gen(cfg, out);
        if (command == "train")
            return cmd_train(cfg, out);
        if (command == "eval")
            return cmd_eval(cfg, out);
        if (command == "export-mask")
            return cmd_export_mask(cfg, out);
        return cmd_prior(cfg, out);
    }
    catch (const UsageError &e)
    {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const DataError &e)
    {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    }
    catch (const DimensionError &e)
    {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    }
    catch (const SingularityError &e)
    {
        err << "numerical error: " << e.what() << '\n';
        return exit_numeric;
    }
    catch (const std::domain_error &e)
    {
        err << "numerical error: " << e.what() << '\n';
        return exit_numeric;
    }
    catch (const std::invalid_argument &e)
    {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::out_of_range &e)
    {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

} // namespace ccsbeam
