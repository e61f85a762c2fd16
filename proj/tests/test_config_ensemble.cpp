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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "bellherald/config.hpp"
#include "bellherald/ensemble.hpp"
#include "bellherald/errors.hpp"
#include "bellherald/output.hpp"

using namespace bellherald;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("bellherald_test_" + name);
    fs::remove_all(dir);
    return dir;
}

RunConfig small(const std::string& engine, double t_end, std::size_t n) {
    RunConfig c = parse_config("engine = " + engine);
    c.t_end = t_end;
    c.n_traj = n;
    c.workers = 1;
    return c;
}

}  // namespace

TEST_CASE("config with defaults") {
    const RunConfig c = parse_config("engine = diffusive\nalpha = 100\nkl = 0.5pi\n");
    CHECK(c.engine == EngineKind::diffusive);
    CHECK(c.params.alpha_mag == 100.0);
    CHECK(c.params.kl == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(c.params.theta == 0.0);
    CHECK(c.params.eta_l == 1.0);
    CHECK(c.params.eta_r == 1.0);
    CHECK(derive_rates(c.params).gamma == doctest::Approx(1.0));
    CHECK(c.t_end == 20.0);
    CHECK(c.dt == 5e-5);
    CHECK(c.sample_stride == 200);
    CHECK(c.unraveling() == Engine::diffusive);
}

TEST_CASE("config syntax") {
    const RunConfig c = parse_config(
        "# comment\n  ENGINE = sme  # trailing\n\nEta_L = 0.95\neta_r=0\nkl = 1.25\ntheta = -pi\nseed = 18446744073709551615\n"
        "out = results/run 1\nemit_svg = yes\nworkers = 3\n");
    CHECK(c.engine == EngineKind::sme);
    CHECK(c.params.eta_l == 0.95);
    CHECK(c.params.eta_r == 0.0);
    CHECK(c.params.kl == 1.25);
    CHECK(c.params.theta == doctest::Approx(-std::numbers::pi));
    CHECK(c.seed == 18446744073709551615ull);
    CHECK(c.out == fs::path("results/run 1"));
    CHECK(c.emit_svg);
    CHECK(c.resolved_workers() == 3);
    CHECK(parse_phase("2*pi") == doctest::Approx(2 * std::numbers::pi));
    CHECK(parse_phase("pi") == doctest::Approx(std::numbers::pi));
}

TEST_CASE("config errors name the key and line") {
    auto expect = [](const std::string& text, const std::string& key, int line) {
        try {
            parse_config(text);
            FAIL("expected ConfigError for: " << text);
        } catch (const ConfigError& e) {
            CHECK(e.key() == key);
            CHECK(e.line() == line);
            CHECK(std::string(e.what()).find(key) != std::string::npos);
        }
    };
    expect("engine = sme\neta_L = 1.2", "eta_l", 2);
    expect("eta_L = 1.2\nengine = sme", "eta_l", 1);
    expect("engine =\n", "engine", 1);
    expect("alpha = 3\n", "engine", 0);
    expect("engine = me\ncolour = red", "colour", 2);
    expect("engine = me\nalpha = 1\nalpha = 2", "alpha", 3);
    expect("engine = warp", "engine", 1);
    expect("engine = me\ndt = -1", "dt", 2);
    expect("engine = me\nn_traj = 0", "n_traj", 2);
    expect("engine = me\nn_traj = 2.5", "n_traj", 2);
    expect("engine = me\nkl = halfpi", "kl", 2);
    expect("engine = me\njust some words", "just some words", 2);
    CHECK_THROWS_AS(parse_config("engine = me").unraveling(), ConfigError);
}

TEST_CASE("overrides replace file values") {
    const RunConfig c = parse_config("engine = jump\nalpha = 5", {{"alpha", "7"}, {"engine", "sme"}});
    CHECK(c.params.alpha_mag == 7.0);
    CHECK(c.engine == EngineKind::sme);
    CHECK_THROWS_AS(parse_config("engine = jump", {{"bogus", "1"}}), ConfigError);
}

TEST_CASE("load_config reports unreadable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/bellherald.cfg"), ConfigError);
}

TEST_CASE("ensemble statistics do not depend on the worker count") {
    RunConfig c = small("diffusive", 1.0, 12);
    EnsembleOptions opt;
    opt.write_files = false;
    const EnsembleStats a = run_ensemble(c, opt);
    c.workers = 3;
    const EnsembleStats b = run_ensemble(c, opt);
    REQUIRE(a.t.size() == b.t.size());
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        CHECK(max_abs(a.mean_rho[k] - b.mean_rho[k]) == 0.0);
        CHECK(a.se_pops[k] == b.se_pops[k]);
    }
    CHECK(a.left_jump_histogram == b.left_jump_histogram);
    for (const auto& row : a.se_rho)
        for (double se : row) CHECK(se >= 0.0);
}

TEST_CASE("ensemble means are the trajectory averages") {
    RunConfig c = small("jump", 1.0, 6);
    c.params.alpha_mag = 5.0;
    c.dt = 1e-3;
    c.sample_stride = 100;
    std::vector<TrajectoryRecord> recs;
    EnsembleOptions opt;
    opt.write_files = false;
    opt.on_record = [&](std::size_t i, const TrajectoryRecord& r) {
        CHECK(i == recs.size());
        recs.push_back(r);
    };
    const EnsembleStats st = run_ensemble(c, opt);
    REQUIRE(recs.size() == 6);
    const EnsembleStats again = reduce_records(recs, c.t_end, opt);
    const std::size_t k = st.t.size() - 1;
    CHECK(max_abs(st.mean_rho[k] - again.mean_rho[k]) == 0.0);
    CMat4 sum;
    for (const auto& r : recs) sum += outer(r.psi[k], r.psi[k]);
    CHECK(max_abs(st.mean_rho[k] - (1.0 / 6) * sum) < 1e-15);
}

TEST_CASE("guard violations carry the trajectory index") {
    RunConfig c = small("diffusive", 1.0, 2);
    c.params.alpha_mag = 5.0;
    try {
        run_ensemble(c, {.write_files = false});
        FAIL("expected GuardError");
    } catch (const GuardError& e) {
        CHECK(std::string(e.what()).find("trajectory 0") != std::string::npos);
    }
}

TEST_CASE("CSV schemas and byte-identical reruns") {
    const fs::path dir = scratch("csv");
    RunConfig c = small("diffusive", 1.0, 3);
    c.out = dir;
    c.emit_svg = true;
    run_ensemble(c);
    const std::string stats = slurp(dir / "ensemble_diffusive.csv");
    const std::string traj = slurp(dir / "trajectory_0.csv");
    CHECK(first_line(dir / "trajectory_0.csv") ==
          "t,norm,pop_ee,pop_plus_i,pop_minus_i,pop_gg,entanglement,jump_left,jump_right,dxi");
    CHECK(first_line(dir / "ensemble_diffusive.csv") ==
          "t,mean_pop_ee,se_pop_ee,mean_pop_plus_i,se_pop_plus_i,mean_pop_minus_i,se_pop_minus_i,mean_pop_gg,"
          "se_pop_gg,mean_entanglement,se_entanglement");
    CHECK(fs::exists(dir / "trajectory_2.csv"));
    CHECK(fs::exists(dir / "ensemble_populations.svg"));
    run_ensemble(c);
    CHECK(slurp(dir / "ensemble_diffusive.csv") == stats);
    CHECK(slurp(dir / "trajectory_0.csv") == traj);

    G2Curve g2{{0.0, 0.5}, {1.0, 1.25}};
    write_g2_csv(g2, dir / "g2.csv");
    CHECK(slurp(dir / "g2.csv") == "tau,g2\n0,1\n0.5,1.25\n");
    fs::remove_all(dir);
}

TEST_CASE("number formatting uses nine significant digits") {
    CHECK(format_float(1.0 / 3.0) == "0.333333333");
    CHECK(format_float(5e-5) == "5e-05");
    CHECK(format_float(20.0) == "20");
}

TEST_CASE("I/O failures name the path") {
    const fs::path blocker = scratch("blocker");
    { std::ofstream(blocker) << "x"; }
    try {
        write_g2_csv(G2Curve{}, blocker / "g2.csv");
        FAIL("expected Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
    }
    fs::remove(blocker);
}

TEST_CASE("small consistency check against the master equation") {
    RunConfig c = small("jump", 2.0, 300);
    c.params.alpha_mag = 5.0;
    c.dt = 1e-3;
    c.sample_stride = 250;
    c.seed = 99;
    const ConsistencyReport rep = consistency_check(c);
    CHECK(rep.stats.n_traj == 300);
    CHECK(rep.stats.t.size() == 9);
    CHECK(rep.pass);
    CHECK(rep.max_deviation_se < 4.5);
}
