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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellherald/model.hpp"
#include "bellherald/trajectories.hpp"

namespace bellherald {

enum class EngineKind { jump, diffusive, sme, me, steady, g2, check };

std::string_view to_string(EngineKind engine);

// Everything a CLI run needs. Defaults reproduce the published figures:
// kL = pi/2, |alpha| = 100, theta = 0, Gamma = 1, t_end = 20, dt = 5e-5,
// eta_L = eta_R = 1, psi0 = |gg>.
struct RunConfig {
    EngineKind engine = EngineKind::diffusive;
    ModelParams params;
    double t_end = 20.0;
    double dt = 5e-5;
    std::size_t sample_stride = 200;
    std::size_t n_traj = 1;
    std::uint64_t seed = 1;
    std::filesystem::path out = "bellherald_out";
    unsigned workers = 0;  // 0 = available parallelism
    bool emit_svg = false;
    double min_alpha = 20.0;  // strong-drive guard; not a file key

    // The stochastic engine; throws ConfigError for me/steady/g2/check.
    Engine unraveling() const;
    RunOptions run_options() const;
    unsigned resolved_workers() const;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

// Parses `key = value` lines; '#' starts a comment. Keys are case-insensitive.
// Overrides are applied after the text as if appended (reported as line 0).
// Throws ConfigError naming the key and line for unknown keys, duplicate
// keys, malformed or out-of-range values, and a missing engine.
RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

// Applies BELLHERALD_WORKERS when set.
void apply_environment(RunConfig& config);

// Parses a phase written as a number of radians or as "<x>pi".
double parse_phase(std::string_view text);

}  // namespace bellherald
