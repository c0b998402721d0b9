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

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmimo/rmimo.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw rmimo::config_error("cannot open output file '" + out_path + "'");
    f << text;
}

struct SimFlags {
    int figure = 4;
    std::string config_path;
    std::string snr, k_list, codes, grid;
    std::string gain_norm, combiner, sic, out;
    double beta2 = -1.0;
    std::int64_t trials = -1;
    std::int64_t max_errors = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
    int order = 0;
    int hold = 0;
    std::string codes_dir;
    bool no_early_stop = false;
};

int run_sim(const SimFlags& f) {
    rmimo::SimConfig cfg;
    if (!f.config_path.empty()) cfg = rmimo::load_sim_config(f.config_path);

    if (!f.snr.empty()) cfg.snr_db = rmimo::parse_value_list(f.snr);
    if (!f.k_list.empty()) cfg.k_db = rmimo::parse_k_list(f.k_list);
    if (!f.codes.empty()) cfg.schemes = split_list(f.codes);
    if (!f.grid.empty()) cfg.beta2_grid = rmimo::parse_value_list(f.grid);
    if (f.trials >= 0) cfg.trials = f.trials;
    if (f.max_errors >= 0) cfg.max_errors = f.max_errors;
    if (f.seed_set) cfg.master_seed = f.seed;
    if (!f.gain_norm.empty()) cfg.gain_norm = rmimo::parse_gain_norm(f.gain_norm);
    if (!f.combiner.empty()) cfg.combiner = rmimo::parse_combiner(f.combiner);
    if (!f.sic.empty()) {
        if (f.sic != "zf" && f.sic != "mmse")
            throw rmimo::config_error("unknown SIC filter '" + f.sic + "'");
        cfg.sic_filter = f.sic == "mmse" ? rmimo::SicFilter::mmse : rmimo::SicFilter::zf;
    }
    if (f.beta2 >= 0.0) cfg.beta2 = f.beta2;
    if (f.threads >= 0) cfg.threads = f.threads;
    if (f.order > 0) cfg.order = f.order;
    if (f.hold > 0) cfg.hold_codewords = f.hold;
    if (!f.codes_dir.empty()) cfg.codes_dir = f.codes_dir;
    if (!f.out.empty()) cfg.out = f.out;
    if (f.no_early_stop) cfg.early_stop = false;

    const rmimo::Figure fig = rmimo::parse_figure(f.figure);
    const auto points = rmimo::run_figure(fig, cfg);
    emit(rmimo::to_csv(points), cfg.out);
    return 0;
}

int run_analyze_pep(int order, const std::string& k, const std::string& norm, double snr_db,
                    std::size_t samples, std::uint64_t seed, double beta2, const std::string& out) {
    const rmimo::Constellation c = rmimo::build_qam(order);
    const rmimo::CodeParams params = rmimo::make_params(beta2);
    const rmimo::KFactor kf = rmimo::KFactor::parse(k);
    const rmimo::GainNorm gn = rmimo::parse_gain_norm(norm);

    rmimo::RandomStream rng = rmimo::RandomStream::substream(seed, 0xa11ce5ULL);
    const rmimo::CMat rhg = rmimo::estimate_Rhg(kf, gn, samples, rng);
    const double gamma = std::pow(10.0, snr_db / 10.0);

    std::string csv = "c_s1,c_s2,u_s1,u_s2,rank,lambda1,lambda2,bound,high_snr_bound\n";
    const int m = c.order();
    for (int c1 = 0; c1 < m; ++c1)
        for (int c2 = 0; c2 < m; ++c2)
            for (int u1 = 0; u1 < m; ++u1)
                for (int u2 = 0; u2 < m; ++u2) {
                    if (c1 == u1 && c2 == u2) continue;
                    rmimo::PepInputs in;
                    in.codeword_c = rmimo::encode(c.point(c1), c.point(c2), params);
                    in.codeword_u = rmimo::encode(c.point(u1), c.point(u2), params);
                    in.r_hg = rhg;
                    in.snr_linear = gamma;
                    const rmimo::DiversityReport rep = rmimo::pep_chernoff(in);
                    char line[256];
                    std::snprintf(line, sizeof(line), "%d,%d,%d,%d,%d,%.10g,%.10g,%.10g,%.10g\n",
                                  c1, c2, u1, u2, rep.rank, rep.eigenvalues[0], rep.eigenvalues[1],
                                  rep.bound, rep.high_snr_bound);
                    csv += line;
                }
    emit(csv, out);
    return 0;
}

int run_analyze_sweep(const std::string& grid, double snr_db, const std::string& k,
                      std::int64_t trials, std::uint64_t seed, int order, const std::string& norm,
                      const std::string& combiner, int threads, const std::string& out) {
    const rmimo::Constellation c = rmimo::build_qam(order);
    const auto points = rmimo::sweep_beta2(
        rmimo::parse_value_list(grid), snr_db, rmimo::KFactor::parse(k), trials, seed, c,
        rmimo::parse_gain_norm(norm), rmimo::parse_combiner(combiner),
        rmimo::resolve_threads(threads));
    emit(rmimo::to_csv(points), out);
    return 0;
}

int run_analyze_complexity(int order, const std::string& out) {
    const auto rows = rmimo::complexity_table(order);
    std::string csv = "decoder,multiplications,subtractions,additions,squares,comparisons,metric_evaluations\n";
    for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%lld,%lld,%lld,%lld,%lld,%lld\n", r.decoder.c_str(),
                      static_cast<long long>(r.multiplications), static_cast<long long>(r.subtractions),
                      static_cast<long long>(r.additions), static_cast<long long>(r.squares),
                      static_cast<long long>(r.comparisons),
                      static_cast<long long>(r.metric_evaluations));
        csv += line;
    }
    emit(csv, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo link-level simulator for a rate-two space code on reconfigurable 2x2 MIMO"};
    app.require_subcommand(1);

    // --- sim ---
    SimFlags sf;
    auto* sim = app.add_subcommand("sim", "Run a BER figure sweep and emit CSV");
    sim->add_option("--figure", sf.figure, "Figure to reproduce: 2 (BER vs beta2), 3 (BER vs K), 4 (BER vs SNR)")
        ->check(CLI::IsMember({2, 3, 4}));
    sim->add_option("--config", sf.config_path, "JSON config file; flags override its fields");
    sim->add_option("--snr", sf.snr, "SNR dB list: 'start:step:stop' or comma list (inf allowed)");
    sim->add_option("--k-db", sf.k_list, "Rician K list in dB, comma separated; -inf and inf allowed");
    sim->add_option("--code", sf.codes, "Comma list of schemes: proposed, vblast_ml, vblast_sic, matrix_c, mtd, ...");
    sim->add_option("--beta2-grid", sf.grid, "beta2 grid for figure 2");
    sim->add_option("--trials", sf.trials, "Max trials (codewords) per cell");
    sim->add_option("--max-errors", sf.max_errors, "Early-stop bit-error budget per cell (>= 100)");
    auto* seed_opt = sim->add_option("--seed", sf.seed, "Master seed (64-bit unsigned)");
    sim->add_option("--beta2", sf.beta2, "Design parameter beta2 of the proposed code");
    sim->add_option("--gain-norm", sf.gain_norm, "Antenna gain normalization: paper | sqrt");
    sim->add_option("--combiner", sf.combiner, "Conditional-ML combiner: mf | sum");
    sim->add_option("--sic", sf.sic, "VBLAST SIC nulling filter: zf | mmse");
    sim->add_option("--m", sf.order, "Constellation order (4, 16, 64)");
    sim->add_option("--threads", sf.threads, "Worker threads (0 = all cores)");
    sim->add_option("--hold", sf.hold, "Codewords per channel realization (default 1)");
    sim->add_option("--codes-dir", sf.codes_dir, "Directory with dispersion-code JSON files");
    sim->add_option("--out", sf.out, "Output CSV path (default stdout)");
    sim->add_flag("--no-early-stop", sf.no_early_stop, "Always run the full trial budget");

    // --- analyze ---
    auto* analyze = app.add_subcommand("analyze", "Design-criteria tools");
    analyze->require_subcommand(1);

    int pep_m = 4;
    std::string pep_k = "2", pep_norm = "sqrt", pep_out;
    double pep_snr = 20.0, pep_beta2 = 0.618;
    std::size_t pep_samples = 100000;
    std::uint64_t pep_seed = 1;
    auto* pep = analyze->add_subcommand("pep", "Pairwise-error-probability bound over all codeword pairs");
    pep->add_option("--m", pep_m, "Constellation order");
    pep->add_option("--k-db", pep_k, "Rician K in dB (-inf/inf allowed)");
    pep->add_option("--gain-norm", pep_norm, "paper | sqrt");
    pep->add_option("--snr-db", pep_snr, "Receive SNR in dB");
    pep->add_option("--samples", pep_samples, "Channel draws for the covariance estimate");
    pep->add_option("--seed", pep_seed, "Seed for the covariance estimate");
    pep->add_option("--beta2", pep_beta2, "Design parameter beta2");
    pep->add_option("--out", pep_out, "Output CSV path (default stdout)");

    std::string sw_grid = "0.02:0.02:1.5", sw_k = "2", sw_norm = "sqrt", sw_comb = "mf", sw_out;
    double sw_snr = 20.0;
    std::int64_t sw_trials = 1000000;
    std::uint64_t sw_seed = 1;
    int sw_m = 4, sw_threads = 0;
    auto* sweep = analyze->add_subcommand("sweep-beta2", "BER vs beta2 with common random numbers");
    sweep->add_option("--grid", sw_grid, "beta2 grid: 'start:step:stop' or comma list");
    sweep->add_option("--snr-db", sw_snr, "SNR in dB");
    sweep->add_option("--k-db", sw_k, "Rician K in dB");
    sweep->add_option("--trials", sw_trials, "Trials per grid point");
    sweep->add_option("--seed", sw_seed, "Master seed");
    sweep->add_option("--m", sw_m, "Constellation order");
    sweep->add_option("--gain-norm", sw_norm, "paper | sqrt");
    sweep->add_option("--combiner", sw_comb, "mf | sum");
    sweep->add_option("--threads", sw_threads, "Worker threads (0 = all cores)");
    sweep->add_option("--out", sw_out, "Output CSV path (default stdout)");

    int cx_m = 4;
    std::string cx_out;
    auto* cx = analyze->add_subcommand("complexity", "Arithmetic-operation table for the decoders");
    cx->add_option("--m", cx_m, "Constellation order");
    cx->add_option("--out", cx_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitConfig;
    }

    try {
        sf.seed_set = seed_opt->count() > 0;
        if (sim->parsed()) return run_sim(sf);
        if (pep->parsed())
            return run_analyze_pep(pep_m, pep_k, pep_norm, pep_snr, pep_samples, pep_seed,
                                   pep_beta2, pep_out);
        if (sweep->parsed())
            return run_analyze_sweep(sw_grid, sw_snr, sw_k, sw_trials, sw_seed, sw_m, sw_norm,
                                     sw_comb, sw_threads, sw_out);
        if (cx->parsed()) return run_analyze_complexity(cx_m, cx_out);
    } catch (const rmimo::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rmimo::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
