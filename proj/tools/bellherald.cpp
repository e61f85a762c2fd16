// Copyright 2026 The bellherald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: steady, me, traj, ensemble, g2, check.
//
// Exit codes: 0 success, 1 I/O or other failure, 2 configuration error,
// 3 numerical guard or numerical failure, 4 failed consistency check.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bellherald/config.hpp"
#include "bellherald/ensemble.hpp"
#include "bellherald/entangle.hpp"
#include "bellherald/errors.hpp"
#include "bellherald/lindblad.hpp"
#include "bellherald/output.hpp"
#include "bellherald/trajectories.hpp"

namespace bh = bellherald;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitCheckFailed = 4;

struct Overrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
        {"engine", {}}, {"g", {}},      {"alpha", {}},         {"theta", {}},  {"kl", {}},
        {"eta_l", {}},  {"eta_r", {}},  {"t_end", {}},         {"dt", {}},     {"sample_stride", {}},
        {"n_traj", {}}, {"seed", {}},   {"out", {}},           {"workers", {}}};
    bool svg = false;
    double min_alpha = 20.0;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config_path, "key = value configuration file");
        for (auto& [key, value] : flags) {
            std::string flag = "--" + key;
            for (auto& ch : flag)
                if (ch == '_') ch = '-';
            app->add_option(flag, value, "override '" + key + "'");
        }
        app->add_flag("--svg", svg, "also emit an SVG line chart");
        app->add_option("--min-alpha", min_alpha, "strong-drive guard for diffusive engines (<= 0 disables)");
    }

    bh::RunConfig load(std::optional<std::string> implied_engine) const {
        bh::ConfigOverrides list;
        if (implied_engine) list.emplace_back("engine", *implied_engine);
        for (const auto& [key, value] : flags)
            if (value) list.emplace_back(key, *value);
        if (svg) list.emplace_back("emit_svg", "true");
        bh::RunConfig cfg = config_path.empty() ? bh::parse_config("", list) : bh::load_config(config_path, list);
        bh::apply_environment(cfg);
        cfg.min_alpha = min_alpha;
        return cfg;
    }
};

void print_populations(const char* label, const bh::LevelPopulations& p) {
    std::printf("%s ee=%s +i=%s -i=%s gg=%s\n", label, bh::format_float(p.ee).c_str(),
                bh::format_float(p.plus_i).c_str(), bh::format_float(p.minus_i).c_str(),
                bh::format_float(p.gg).c_str());
}

std::vector<double> grid(double t_end, double step) {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::llround(t_end / step));
    for (std::size_t k = 0; k <= n; ++k) out.push_back(std::min(t_end, static_cast<double>(k) * step));
    return out;
}

int cmd_steady(const bh::RunConfig& cfg) {
    const auto ops = bh::build_operators(cfg.params);
    const bh::DensityOp rho = bh::steady_state(ops);
    const auto path = cfg.out / "steady.csv";
    bh::write_steady_csv(rho, path);
    print_populations("steady", bh::populations(rho));
    std::printf("concurrence=%s max_dev_from_mixed=%s\n", bh::format_float(bh::concurrence(rho)).c_str(),
                bh::format_float(bh::max_abs(rho.mat() - bh::DensityOp::maximally_mixed().mat())).c_str());
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

int cmd_me(const bh::RunConfig& cfg) {
    const bh::MeSolution sol = bh::reference_solution(cfg);
    const auto path = cfg.out / "me.csv";
    bh::write_me_csv(sol, path);
    if (cfg.emit_svg) {
        std::vector<bh::SvgSeries> series{{"ee", {}}, {"+i", {}}, {"-i", {}}, {"gg", {}}};
        for (const auto& s : sol.states) {
            const auto p = bh::populations(s);
            series[0].values.push_back(p.ee);
            series[1].values.push_back(p.plus_i);
            series[2].values.push_back(p.minus_i);
            series[3].values.push_back(p.gg);
        }
        bh::write_svg_chart(cfg.out / "me.svg", "master equation populations", sol.t, series);
    }
    print_populations("final", bh::populations(sol.states.back()));
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

int cmd_g2(const bh::RunConfig& cfg) {
    const auto ops = bh::build_operators(cfg.params);
    const auto tau = grid(cfg.t_end, cfg.dt * static_cast<double>(cfg.sample_stride));
    const bh::G2Curve curve = bh::g2_left(ops, tau);
    const auto path = cfg.out / "g2.csv";
    bh::write_g2_csv(curve, path);
    if (cfg.emit_svg) bh::write_svg_chart(cfg.out / "g2.svg", "g2(tau)", curve.tau, {{"g2", curve.values}});
    std::printf("g2(0)=%s g2(%s)=%s\n", bh::format_float(curve.values.front()).c_str(),
                bh::format_float(curve.tau.back()).c_str(), bh::format_float(curve.values.back()).c_str());
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

int cmd_traj(bh::RunConfig cfg) {
    cfg.n_traj = 1;
    bh::EnsembleOptions opt;
    opt.write_files = false;
    std::optional<bh::TrajectoryRecord> kept;
    opt.on_record = [&](std::size_t, const bh::TrajectoryRecord& r) { kept = r; };
    bh::run_ensemble(cfg, opt);
    const auto path = cfg.out / ("trajectory_" + std::string(bh::to_string(cfg.engine)) + ".csv");
    bh::write_trajectory_csv(*kept, path);
    if (cfg.emit_svg) {
        std::vector<double> t;
        std::vector<bh::SvgSeries> series{{"+i", {}}, {"gg", {}}, {"entanglement", {}}};
        for (const auto& s : kept->samples) {
            t.push_back(s.t);
            series[0].values.push_back(s.pops.plus_i);
            series[1].values.push_back(s.pops.gg);
            series[2].values.push_back(s.entanglement);
        }
        bh::write_svg_chart(cfg.out / "trajectory.svg", "single trajectory", t, series);
    }
    std::printf("left_jumps=%zu right_jumps=%zu\n", kept->jump_count(bh::Channel::left),
                kept->jump_count(bh::Channel::right));
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

int cmd_ensemble(const bh::RunConfig& cfg) {
    const bh::EnsembleStats st = bh::run_ensemble(cfg);
    const std::size_t last = st.t.size() - 1;
    std::printf("n_traj=%zu windows=%zu mean_window=%s herald_entanglement=%s\n", st.n_traj, st.window_count,
                bh::format_float(st.mean_window_duration).c_str(),
                bh::format_float(st.mean_herald_entanglement).c_str());
    std::printf("t=%s mean_pops ee=%s +i=%s -i=%s gg=%s\n", bh::format_float(st.t[last]).c_str(),
                bh::format_float(st.mean_pops[last][0]).c_str(), bh::format_float(st.mean_pops[last][1]).c_str(),
                bh::format_float(st.mean_pops[last][2]).c_str(), bh::format_float(st.mean_pops[last][3]).c_str());
    std::printf("wrote %s\n", cfg.out.string().c_str());
    return kExitOk;
}

int cmd_check(const bh::RunConfig& cfg) {
    const bh::ConsistencyReport rep = bh::consistency_check(cfg);
    std::printf("%s engine=%s n_traj=%zu max_deviation_se=%s max_abs_deviation=%s worst_t=%s violations=%zu\n",
                rep.pass ? "PASS" : "FAIL", std::string(bh::to_string(cfg.engine)).c_str(), cfg.n_traj,
                bh::format_float(rep.max_deviation_se).c_str(), bh::format_float(rep.max_abs_deviation).c_str(),
                bh::format_float(rep.worst_time).c_str(), rep.violations);
    return rep.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bellherald: heralded Bell states of two qubits in a waveguide"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::optional<std::string> implied_engine;
        int (*run)(const bh::RunConfig&);
    };
    const std::vector<Sub> subs = {
        {"steady", "steady state of the master equation", "steady", cmd_steady},
        {"me", "master-equation evolution from |gg>", "me", cmd_me},
        {"traj", "one stochastic trajectory", std::nullopt, [](const bh::RunConfig& c) { return cmd_traj(c); }},
        {"ensemble", "ensemble of trajectories with statistics", std::nullopt, cmd_ensemble},
        {"g2", "reflected-field g2(tau) in the steady state", "g2", cmd_g2},
        {"check", "ensemble mean against the master equation", std::nullopt, cmd_check},
    };
    std::vector<Overrides> overrides(subs.size());
    std::vector<CLI::App*> handles;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        handles.push_back(app.add_subcommand(subs[i].name, subs[i].help));
        overrides[i].attach(handles.back());
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!handles[i]->parsed()) continue;
        try {
            bh::RunConfig cfg = overrides[i].load(subs[i].implied_engine);
            // Trajectory subcommands need a trajectory engine; steady/me/g2 pin their own.
            if (!subs[i].implied_engine) cfg.unraveling();
            return subs[i].run(cfg);
        } catch (const bh::ConfigError& e) {
            std::cerr << e.what() << '\n';
            return kExitConfig;
        } catch (const bh::PreconditionError& e) {
            std::cerr << "invalid input: " << e.what() << '\n';
            return kExitConfig;
        } catch (const bh::GuardError& e) {
            std::cerr << "guard: " << e.what() << '\n';
            return kExitGuard;
        } catch (const bh::NumericalError& e) {
            std::cerr << "numerical failure: " << e.what() << '\n';
            return kExitGuard;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }
    return kExitFailure;
}
