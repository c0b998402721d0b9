/*
 * Copyright 2026 The rmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rmimo/analysis.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/errors.hpp"
#include "rmimo/montecarlo.hpp"

namespace rmimo {

/// Full description of a simulation run. Loadable from a JSON file; CLI
/// flags override individual fields.
struct SimConfig {
    std::vector<std::string> schemes;
    int order = 4;  // M
    std::vector<double> snr_db;
    std::vector<KFactor> k_db;
    std::vector<double> beta2_grid;
    std::int64_t trials = 1000000;
    std::int64_t max_errors = 2000;
    bool early_stop = true;
    std::uint64_t master_seed = 1;
    GainNorm gain_norm = GainNorm::sqrt_normalized;
    Combiner combiner = Combiner::matched_filter;
    SicFilter sic_filter = SicFilter::zf;
    double beta2 = 0.618;
    int threads = 0;  // 0 = hardware concurrency
    int hold_codewords = 1;
    std::string codes_dir = "data";
    std::string out;  // CSV path; empty writes to stdout
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void validate_config(const SimConfig& cfg) {
    if (cfg.schemes.empty()) throw config_error("no schemes configured");
    if (cfg.snr_db.empty()) throw config_error("empty SNR list");
    if (cfg.k_db.empty()) throw config_error("empty K-factor list");
    if (cfg.trials < 1) throw config_error("trials must be at least 1");
    if (cfg.max_errors < 100)
        throw config_error("max_errors below 100 invalidates the confidence intervals");
    if (cfg.order != 4 && cfg.order != 16 && cfg.order != 64)
        throw config_error("constellation order must be 4, 16 or 64");
    if (cfg.hold_codewords < 1) throw config_error("hold_codewords must be at least 1");
}

/// Parses "start:step:stop" (inclusive stop, within half a step) or a comma
/// list of values; "inf"/"-inf" allowed where the caller permits them.
inline std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    auto parse_one = [](const std::string& tok) {
        if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
        if (tok == "-inf") return -std::numeric_limits<double>::infinity();
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw config_error("cannot parse numeric value '" + tok + "'");
        }
        if (pos != tok.size()) throw config_error("cannot parse numeric value '" + tok + "'");
        return v;
    };

    const auto colons = std::count(text.begin(), text.end(), ':');
    if (colons == 2) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        const double start = parse_one(text.substr(0, c1));
        const double step = parse_one(text.substr(c1 + 1, c2 - c1 - 1));
        const double stop = parse_one(text.substr(c2 + 1));
        if (!(step > 0.0)) throw config_error("range step must be positive in '" + text + "'");
        for (double v = start; v <= stop + 0.5 * step; v += step) out.push_back(v);
        return out;
    }

    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(parse_one(tok));
    }
    if (out.empty()) throw config_error("empty value list '" + text + "'");
    return out;
}

inline std::vector<KFactor> parse_k_list(const std::string& text) {
    std::vector<KFactor> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(KFactor::parse(tok));
    }
    if (out.empty()) throw config_error("empty K-factor list '" + text + "'");
    return out;
}

inline SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("malformed config file '" + path + "': " + e.what());
    }

    static const std::set<std::string> known = {
        "schemes",   "order",     "snr_db",  "k_db",           "beta2_grid", "trials",
        "max_errors", "early_stop", "seed",   "gain_norm",      "combiner",   "sic",
        "beta2",     "threads",   "out",     "hold_codewords", "codes_dir"};
    for (const auto& item : j.items())
        if (known.find(item.key()) == known.end())
            throw config_error("unknown config key '" + item.key() + "' in '" + path + "'");

    SimConfig cfg;
    try {
        if (j.contains("schemes")) cfg.schemes = j["schemes"].get<std::vector<std::string>>();
        if (j.contains("order")) cfg.order = j["order"].get<int>();
        if (j.contains("snr_db")) {
            if (j["snr_db"].is_string())
                cfg.snr_db = parse_value_list(j["snr_db"].get<std::string>());
            else
                for (const auto& v : j["snr_db"])
                    cfg.snr_db.push_back(v.is_string()
                                             ? parse_value_list(v.get<std::string>()).at(0)
                                             : v.get<double>());
        }
        if (j.contains("k_db")) {
            for (const auto& v : j["k_db"])
                cfg.k_db.push_back(v.is_string() ? KFactor::parse(v.get<std::string>())
                                                 : KFactor::from_db(v.get<double>()));
        }
        if (j.contains("beta2_grid")) {
            if (j["beta2_grid"].is_string())
                cfg.beta2_grid = parse_value_list(j["beta2_grid"].get<std::string>());
            else
                cfg.beta2_grid = j["beta2_grid"].get<std::vector<double>>();
        }
        if (j.contains("trials")) cfg.trials = j["trials"].get<std::int64_t>();
        if (j.contains("max_errors")) cfg.max_errors = j["max_errors"].get<std::int64_t>();
        if (j.contains("early_stop")) cfg.early_stop = j["early_stop"].get<bool>();
        if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
        if (j.contains("gain_norm")) cfg.gain_norm = parse_gain_norm(j["gain_norm"].get<std::string>());
        if (j.contains("combiner")) cfg.combiner = parse_combiner(j["combiner"].get<std::string>());
        if (j.contains("sic"))
            cfg.sic_filter = j["sic"].get<std::string>() == "mmse" ? SicFilter::mmse : SicFilter::zf;
        if (j.contains("beta2")) cfg.beta2 = j["beta2"].get<double>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
        if (j.contains("hold_codewords")) cfg.hold_codewords = j["hold_codewords"].get<int>();
        if (j.contains("codes_dir")) cfg.codes_dir = j["codes_dir"].get<std::string>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config file '" + path + "': " + e.what());
    }
    return cfg;
}

enum class Figure { beta2_sweep = 2, ber_vs_k = 3, ber_vs_snr = 4 };

inline Figure parse_figure(int n) {
    switch (n) {
        case 2: return Figure::beta2_sweep;
        case 3: return Figure::ber_vs_k;
        case 4: return Figure::ber_vs_snr;
        default: throw config_error("unknown figure " + std::to_string(n) + " (expected 2, 3 or 4)");
    }
}

/// Figure defaults where the config leaves lists empty.
inline void apply_figure_defaults(Figure fig, SimConfig& cfg) {
    switch (fig) {
        case Figure::beta2_sweep:
            if (cfg.schemes.empty()) cfg.schemes = {"proposed"};
            if (cfg.snr_db.empty()) cfg.snr_db = {20.0};
            if (cfg.k_db.empty()) cfg.k_db = {KFactor::from_db(2.0)};
            if (cfg.beta2_grid.empty()) cfg.beta2_grid = parse_value_list("0.02:0.02:1.5");
            break;
        case Figure::ber_vs_k:
            if (cfg.schemes.empty()) cfg.schemes = {"proposed", "matrix_c", "mtd", "vblast_ml"};
            if (cfg.snr_db.empty()) cfg.snr_db = {10.0};
            if (cfg.k_db.empty())
                cfg.k_db = {KFactor::from_db(0.0),  KFactor::from_db(4.0),  KFactor::from_db(8.0),
                            KFactor::from_db(12.0), KFactor::from_db(16.0), KFactor::from_db(20.0),
                            KFactor::pure_los()};
            break;
        case Figure::ber_vs_snr:
            if (cfg.schemes.empty())
                cfg.schemes = {"proposed", "matrix_c", "mtd", "vblast_ml", "vblast_sic"};
            if (cfg.snr_db.empty()) cfg.snr_db = parse_value_list("0:2:30");
            if (cfg.k_db.empty()) cfg.k_db = {KFactor::from_db(2.0)};
            break;
    }
}

/// Runs a whole figure: one BerPoint per (scheme, x-value), with common
/// random numbers across schemes at each x.
inline std::vector<BerPoint> run_figure(Figure fig, SimConfig cfg) {
    apply_figure_defaults(fig, cfg);
    validate_config(cfg);
    const Constellation c = build_qam(cfg.order);
    const int threads = resolve_threads(cfg.threads);

    if (fig == Figure::beta2_sweep) {
        return sweep_beta2(cfg.beta2_grid, cfg.snr_db.at(0), cfg.k_db.at(0), cfg.trials,
                           cfg.master_seed, c, cfg.gain_norm, cfg.combiner, threads);
    }

    std::vector<SchemeRuntime> runtimes;
    runtimes.reserve(cfg.schemes.size());
    for (const auto& name : cfg.schemes)
        runtimes.push_back(make_scheme(name, c, cfg.beta2, cfg.gain_norm, cfg.combiner,
                                       cfg.codes_dir, cfg.sic_filter));

    std::vector<BerPoint> points;
    const std::size_t n_x = fig == Figure::ber_vs_k ? cfg.k_db.size() : cfg.snr_db.size();
    for (const auto& rt : runtimes) {
        for (std::size_t xi = 0; xi < n_x; ++xi) {
            CellSpec cell;
            cell.snr_db = fig == Figure::ber_vs_k ? cfg.snr_db.at(0) : cfg.snr_db[xi];
            cell.k = fig == Figure::ber_vs_k ? cfg.k_db[xi] : cfg.k_db.at(0);
            cell.master_seed = cfg.master_seed;
            cell.cell_id = xi;  // shared across schemes: common random numbers
            cell.trials = cfg.trials;
            cell.max_errors = cfg.max_errors;
            cell.early_stop = cfg.early_stop;
            cell.threads = threads;
            cell.hold_codewords = cfg.hold_codewords;
            points.push_back(run_cell(rt, c, cell));
        }
    }
    return points;
}

inline std::string format_double(double v, const char* fmt = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

/// CSV with the fixed schema scheme,snr_db,k_db,beta2,trials,bit_errors,ber,ci95.
inline std::string to_csv(const std::vector<BerPoint>& points) {
    std::string out = "scheme,snr_db,k_db,beta2,trials,bit_errors,ber,ci95\n";
    for (const auto& p : points) {
        out += p.scheme;
        out += ',';
        out += format_double(p.snr_db, "%g");
        out += ',';
        out += p.k.str();
        out += ',';
        out += format_double(p.beta2, "%g");
        out += ',';
        out += std::to_string(p.trials_run);
        out += ',';
        out += std::to_string(p.bit_errors);
        out += ',';
        out += format_double(p.ber);
        out += ',';
        out += format_double(p.ci95);
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::vector<BerPoint>& points, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << to_csv(points);
}

}  // namespace rmimo
