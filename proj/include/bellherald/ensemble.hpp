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

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "bellherald/config.hpp"
#include "bellherald/lindblad.hpp"
#include "bellherald/trajectories.hpp"

namespace bellherald {

// Sample means over an ensemble, on the common trajectory time grid.
struct EnsembleStats {
    Engine engine = Engine::diffusive;
    std::size_t n_traj = 0;
    std::vector<double> t;
    std::vector<CMat4> mean_rho;
    // Standard error of Re and Im of each rho entry, row-major: [2k] Re, [2k+1] Im.
    std::vector<std::array<double, 32>> se_rho;
    std::vector<std::array<double, 4>> mean_pops;  // ee, +i, -i, gg
    std::vector<std::array<double, 4>> se_pops;
    std::vector<double> mean_entanglement;
    std::vector<double> se_entanglement;

    std::vector<std::size_t> left_jump_histogram;  // over [0, t_end]
    double histogram_bin_width = 0.0;

    std::size_t window_count = 0;       // closed windows
    double mean_window_duration = 0.0;  // exposure / closed windows (exponential MLE with censoring at t_end)
    double mean_closed_duration = 0.0;  // plain average of closed windows, biased low by censoring
    double se_window_duration = 0.0;    // mean / sqrt(window_count)
    std::size_t odd_jump_count = 0;
    std::size_t odd_failures = 0;
    double min_odd_fidelity = 1.0;
    double mean_herald_entanglement = 0.0;
};

struct EnsembleOptions {
    std::size_t histogram_bins = 50;
    std::size_t trajectory_csv_limit = 16;
    bool write_files = true;  // stats CSV, first trajectory CSVs, optional SVG under config.out
    double fidelity_threshold = 0.999;
    // Called in trajectory order after each record is reduced.
    std::function<void(std::size_t, const TrajectoryRecord&)> on_record;
};

// Runs config.n_traj trajectories of config.unraveling() from |gg>. Stream i
// belongs to trajectory i, so results do not depend on the worker count.
EnsembleStats run_ensemble(const RunConfig& config, const EnsembleOptions& options = {});

// Reduces already computed records (all on the same grid).
EnsembleStats reduce_records(const std::vector<TrajectoryRecord>& records, double t_end,
                             const EnsembleOptions& options = {});

// Master-equation reference on the trajectory grid. The RK4 step is the
// trajectory dt, subdivided when it exceeds dt_max.
MeSolution reference_solution(const RunConfig& config);

struct ConsistencyReport {
    bool pass = false;
    double max_deviation_se = 0.0;  // max |mean - ME| / SE over times and components
    double max_abs_deviation = 0.0;
    double worst_time = 0.0;
    std::size_t violations = 0;
    EnsembleStats stats;
};

// Every real component of the ensemble-mean rho must agree with the master
// equation within n_se standard errors (plus an absolute floor) at every
// sampled time.
ConsistencyReport compare_with_reference(const EnsembleStats& stats, const MeSolution& reference, double n_se = 3.0,
                                         double floor = 1e-9);
ConsistencyReport consistency_check(const RunConfig& config, double n_se = 3.0, double floor = 1e-9);

}  // namespace bellherald
