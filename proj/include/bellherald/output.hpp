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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bellherald/ensemble.hpp"
#include "bellherald/lindblad.hpp"
#include "bellherald/trajectories.hpp"

namespace bellherald {

// "%.9g"
std::string format_float(double x);

// All writers create parent directories and throw Error naming the path on
// I/O failure.
void write_trajectory_csv(const TrajectoryRecord& record, const std::filesystem::path& path);
void write_stats_csv(const EnsembleStats& stats, const std::filesystem::path& path);
void write_me_csv(const MeSolution& solution, const std::filesystem::path& path);
void write_g2_csv(const G2Curve& curve, const std::filesystem::path& path);
void write_steady_csv(const DensityOp& rho, const std::filesystem::path& path);

struct SvgSeries {
    std::string name;
    std::vector<double> values;
};

void write_svg_chart(const std::filesystem::path& path, std::string_view title, const std::vector<double>& x,
                     const std::vector<SvgSeries>& series);

}  // namespace bellherald
