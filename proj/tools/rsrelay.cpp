// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - rate-splitting multi-pair massive MIMO relay simulator
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

// Command-line front end: sweeps, DE/MC comparison, figure reproduction.

#include "rsrelay/deteq.hpp"
#include "rsrelay/experiments.hpp"
#include "rsrelay/montecarlo.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifndef RSRELAY_SPEC_DIR
#define RSRELAY_SPEC_DIR "specs"
#endif

namespace fs = std::filesystem;
using namespace rsrelay;

namespace
{

// dB flags are converted to linear here and nowhere else.
struct Overrides
{
    std::string config_file;
    double rho_db = 0, sigma_si_db = 0, p_tr_db = 0;
    int m = 0, n = 0, k = 0, t_block = 0, tau = 0, draws = 0;
    std::string duplex, strategy, csit;
    std::uint64_t seed = 0;
    std::string out = ".";
    CLI::Option *o_rho, *o_si, *o_ptr, *o_m, *o_n, *o_k, *o_T, *o_tau, *o_draws, *o_dup, *o_str, *o_csit, *o_seed;

    void attach(CLI::App* app)
    {
        app->add_option("--config", config_file, "JSON file with SystemConfig fields")->check(CLI::ExistingFile);
        o_rho = app->add_option("--rho-db", rho_db, "transmit SNR rho (dB)");
        o_si = app->add_option("--sigma-si-db", sigma_si_db, "self-interference variance (dB)");
        o_ptr = app->add_option("--p-tr-db", p_tr_db, "pilot power (dB)");
        o_m = app->add_option("--m", m, "relay transmit antennas")->check(CLI::PositiveNumber);
        o_n = app->add_option("--n", n, "relay receive antennas")->check(CLI::PositiveNumber);
        o_k = app->add_option("--k", k, "user pairs")->check(CLI::PositiveNumber);
        o_T = app->add_option("--t-block", t_block, "coherence block length")->check(CLI::PositiveNumber);
        o_tau = app->add_option("--tau", tau, "pilot length")->check(CLI::PositiveNumber);
        o_dup = app->add_option("--duplex", duplex, "fd|hd")->check(CLI::IsMember({"fd", "hd"}));
        o_str = app->add_option("--strategy", strategy, "rs|nors")->check(CLI::IsMember({"rs", "nors"}));
        o_csit = app->add_option("--csit", csit, "perfect|imperfect")->check(CLI::IsMember({"perfect", "imperfect"}));
        o_seed = app->add_option("--seed", seed, "single seed (replaces the spec's seed list)");
        o_draws = app->add_option("--draws", draws, "Monte-Carlo draws")->check(CLI::PositiveNumber);
        app->add_option("--out", out, "output directory");
    }

    void apply(SystemConfig& c) const
    {
        if (!config_file.empty())
        {
            std::ifstream is(config_file);
            apply_json(c, nlohmann::json::parse(is));
        }
        if (o_rho->count())
            c.rho = db_to_linear(rho_db);
        if (o_si->count())
            c.sigma2_SI = db_to_linear(sigma_si_db);
        if (o_ptr->count())
            c.p_tr = db_to_linear(p_tr_db);
        if (o_m->count())
            c.M = m;
        if (o_n->count())
            c.N = n;
        if (o_k->count())
            c.K = k;
        if (o_T->count())
            c.T = t_block;
        if (o_tau->count())
            c.tau = tau;
        if (o_dup->count())
            c.duplex_mode = parse_duplex(duplex);
        if (o_str->count())
            c.strategy = parse_strategy(strategy);
        if (o_csit->count())
            c.csit_mode = parse_csit(csit);
    }

    void apply(SweepSpec& s) const
    {
        apply(s.base);
        if (o_dup->count())
            s.duplexes = {parse_duplex(duplex)};
        if (o_str->count())
            s.strategies = {parse_strategy(strategy)};
        if (o_csit->count())
            s.csits = {parse_csit(csit)};
        if (o_seed->count())
            s.seeds = {seed};
        if (o_draws->count())
            s.n_draws = draws;
        s.validate();
    }
};

int run_specs(std::vector<SweepSpec> specs, const Overrides& ov)
{
    fs::create_directories(ov.out);
    for (auto& spec : specs)
    {
        ov.apply(spec);
        std::fprintf(stderr, "sweep %s: %zu values\n", spec.name.c_str(), spec.values.size());
        const auto table = run_sweep(spec);
        if (spec.emit_csv)
        {
            const auto p = fs::path(ov.out) / (spec.name + ".csv");
            emit_csv(table, p);
            std::printf("wrote %s\n", p.string().c_str());
        }
        if (spec.emit_plot)
        {
            const auto p = fs::path(ov.out) / (spec.name + ".svg");
            emit_plot(table, p, spec.name);
            std::printf("wrote %s\n", p.string().c_str());
        }
        if (spec.source_mc && spec.source_de)
        {
            const auto rep = compare_de_mc(table, 0.05);
            std::printf("  DE vs MC: max rel. error %.4f, median %.4f\n", rep.max_error, rep.median_error);
        }
    }
    return 0;
}

int run_compare(const std::string& csv, double tol)
{
    const auto rep = compare_de_mc(read_csv(csv), tol);
    for (const auto& c : rep.cells)
        std::printf("%s=%g %s %s %s seed=%llu mc=%.6f de=%.6f rel=%.4f %s\n", c.axis.c_str(), c.axis_value,
                    std::string(to_string(c.strategy)).c_str(), std::string(to_string(c.duplex)).c_str(),
                    std::string(to_string(c.csit)).c_str(), static_cast<unsigned long long>(c.seed), c.mc, c.de,
                    c.rel_error, c.pass ? "PASS" : "FAIL");
    std::printf("cells=%zu max=%.4f median=%.4f -> %s\n", rep.cells.size(), rep.max_error, rep.median_error,
                rep.passed ? "PASS" : "FAIL");
    return rep.passed ? 0 : 1;
}

int run_point(const Overrides& ov)
{
    SystemConfig cfg;
    ov.apply(cfg);
    cfg.validate();
    const auto profile = uniform_profile(cfg, 1.0);
    const int draws = ov.o_draws->count() ? ov.draws : 200;
    const std::uint64_t seed = ov.o_seed->count() ? ov.seed : 1;
    const auto de = compute_de(cfg, profile);
    const auto mc = mc_sum_rate(cfg, profile, draws, seed);
    std::printf("config: %s\n", to_json(cfg).dump().c_str());
    std::printf("t=%.6f  lambda_bar=%.6f  Ybar=%.6g\n", de.t, de.second_hop.lambda_bar, de.Ybar);
    std::printf("%-4s sum=%.6f hop1=%.6f hop2=%.6f common=%.6f\n", "de", de.rates.sum_rate, de.rates.rate_hop1,
                de.rates.rate_hop2, de.rates.R_c);
    std::printf("%-4s sum=%.6f hop1=%.6f hop2=%.6f common=%.6f  (stderr %.4f, lambda %.6f, %d draws)\n", "mc",
                mc.sum_rate, mc.rate_hop1, mc.rate_hop2, mc.R_c, mc.sum_rate_stderr, mc.lambda, draws);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rsrelay: rate-splitting multi-pair massive MIMO relay simulator"};
    app.require_subcommand(1);

    Overrides ov;
    std::string spec_file, csv_file, spec_dir = RSRELAY_SPEC_DIR;
    double tol = 0.05;
    bool paper = false;

    auto* sweep = app.add_subcommand("sweep", "run the sweep(s) described by a JSON spec file");
    sweep->add_option("spec", spec_file, "sweep spec")->required()->check(CLI::ExistingFile);
    sweep->add_flag("--paper", paper, "apply the spec's paper-scale overrides");
    ov.attach(sweep);

    auto* compare = app.add_subcommand("compare", "pair mc/de rows of a sweep CSV and check relative error");
    compare->add_option("csv", csv_file, "sweep CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--tol", tol, "relative tolerance")->check(CLI::NonNegativeNumber);

    auto* point = app.add_subcommand("point", "evaluate one configuration (DE and MC)");
    Overrides pov;
    pov.attach(point);

    std::vector<std::pair<std::string, CLI::App*>> figs;
    std::vector<Overrides> fig_ov(5);
    for (int i = 1; i <= 5; ++i)
    {
        const std::string name = "fig" + std::to_string(i);
        auto* f = app.add_subcommand(name, "reproduce figure " + std::to_string(i));
        auto* g = f->add_option_group("scale");
        g->add_flag("--desk", "desk scale (default)");
        g->add_flag("--paper", paper, "paper scale (M = N = 100, K = 10, 1000 draws)");
        g->require_option(0, 1);
        f->add_option("--spec-dir", spec_dir, "directory holding figN.json");
        fig_ov[static_cast<std::size_t>(i - 1)].attach(f);
        figs.emplace_back(name, f);
    }

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sweep)
            return run_specs(load_sweep_file(spec_file, paper), ov);
        if (*compare)
            return run_compare(csv_file, tol);
        if (*point)
            return run_point(pov);
        for (std::size_t i = 0; i < figs.size(); ++i)
            if (*figs[i].second)
                return run_specs(load_sweep_file(fs::path(spec_dir) / (figs[i].first + ".json"), paper), fig_ov[i]);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "rsrelay: %s\n", e.what());
        return 2;
    }
    return 0;
}
