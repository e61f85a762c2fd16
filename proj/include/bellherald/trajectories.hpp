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

// Stochastic unravelings of the two-qubit waveguide master equation.
//
//  * jump SSE: photon counting at both ends, J_L and the full J_R (drive
//    offset included). Exact but needs dt * |alpha|^2 / 2pi << 1.
//  * diffusive SSE: strong-drive limit where right counts become a Gaussian
//    record d xi; left jumps stay discrete.
//  * SME: the diffusive SSE with detection efficiencies eta_L, eta_R acting
//    on a mixed conditional state.
//
// Each step draws its random numbers in a fixed order from a StreamRng, so a
// (seed, stream, dt, params) tuple fully determines a trajectory, and the
// diffusive SSE and the SME consume identical draws.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bellherald/entangle.hpp"
#include "bellherald/lindblad.hpp"
#include "bellherald/model.hpp"
#include "bellherald/rng.hpp"

namespace bellherald {

enum class Channel { left, right };
enum class Engine { jump, diffusive, sme };

std::string_view to_string(Engine engine);

// Per-step jump probability cap for the first-order Bernoulli sampling.
inline constexpr double kMaxJumpProbability = 0.05;

struct JumpEvent {
    double time = 0.0;
    Channel channel = Channel::left;
    double pre_fidelity_plus_i = 0.0;
    double post_fidelity_plus_i = 0.0;
    double post_fidelity_gg = 0.0;
    double post_entanglement = 0.0;  // S for pure states, S_F for mixed
};

// One row of the sampled trajectory. Jump counts and dxi are accumulated over
// the steps since the previous sample; norm is the pre-normalization norm
// (trace for the SME) of the last step.
struct TrajectorySample {
    double t = 0.0;
    double norm = 1.0;
    LevelPopulations pops;
    double entanglement = 0.0;
    int jumps_left = 0;
    int jumps_right = 0;
    double dxi = 0.0;
};

struct TrajectoryRecord {
    Engine engine = Engine::diffusive;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double dt = 0.0;
    std::vector<TrajectorySample> samples;
    std::vector<CVec4> psi;   // SSE engines, parallel to samples
    std::vector<CMat4> rho;   // SME, parallel to samples
    std::vector<JumpEvent> jumps;
    std::vector<double> noise;  // every d xi increment

    std::vector<double> t_grid() const;
    std::size_t jump_count(Channel channel) const;
};

struct RunOptions {
    double t_end = 20.0;
    double dt = 5e-5;
    std::size_t sample_stride = 200;
    bool record_states = true;
    bool record_noise = true;
};

// Validity guards of the strong-drive engines.
struct DiffusiveGuards {
    double min_alpha = 20.0;  // |alpha| below this is rejected; <= 0 disables
    bool left_jumps = true;   // false freezes the left detector (testing aid)
};

struct SseStep {
    bool left = false;
    bool right = false;
    double dxi = 0.0;
    double norm = 1.0;
};

struct SmeStep {
    bool left = false;
    double dxi = 0.0;
    double trace = 1.0;
};

CVec4 apply_left_jump(const ModelOperators& ops, const CVec4& psi);
CVec4 apply_right_jump(const ModelOperators& ops, const CVec4& psi);
CMat4 apply_left_jump(const ModelOperators& ops, const CMat4& rho);

class JumpSseStepper {
   public:
    JumpSseStepper(const ModelOperators& ops, double dt);
    // Throws GuardError when dt <J^dag J> exceeds kMaxJumpProbability.
    SseStep step(CVec4& psi, StreamRng& rng) const;

   private:
    double dt_;
    CMat4 no_jump_;
    CMat4 jump_left_;
    CMat4 jump_right_;
};

class DiffusiveSseStepper {
   public:
    DiffusiveSseStepper(const ModelOperators& ops, double dt, const DiffusiveGuards& guards = {});
    SseStep step(CVec4& psi, StreamRng& rng) const;
    // The step with d xi = 0 and no left detection.
    void drift_step(CVec4& psi) const;

   private:
    double dt_;
    double sqrt_dt_;
    bool left_jumps_;
    CMat4 drift_;   // propagator of -i(H_d + H_qq) - 1/2 L^dag L - 1/2 J_L^dag J_L
    CMat4 record_;  // L = -i e^{-i theta} sqrt(2 pi) g c-
    CMat4 jump_left_;

    friend class SmeStepper;
};

class SmeStepper {
   public:
    SmeStepper(const ModelOperators& ops, double dt, double eta_l, double eta_r, const DiffusiveGuards& guards = {});
    // Throws NumericalError if the unnormalized trace collapses below 1e-14.
    SmeStep step(CMat4& rho, StreamRng& rng) const;

   private:
    DiffusiveSseStepper base_;
    double eta_l_;
    double eta_r_;
    // Unmonitored feed: image of each basis matrix E_k under the 4th-order
    // Taylor step of the unconditional generator, minus drift E_k drift^dag.
    std::array<CMat4, 16> feed_{};
    bool has_feed_ = false;
};

std::pair<CVec4, SseStep> step_jump_sse(const ModelOperators& ops, const CVec4& psi, double dt, StreamRng& rng);
std::pair<CVec4, SseStep> step_diffusive_sse(const ModelOperators& ops, const CVec4& psi, double dt, StreamRng& rng,
                                             const DiffusiveGuards& guards = {});
std::pair<CMat4, SmeStep> step_sme(const ModelOperators& ops, const CMat4& rho, double dt, StreamRng& rng,
                                   double eta_l, double eta_r, const DiffusiveGuards& guards = {});

TrajectoryRecord run_jump_sse(const ModelOperators& ops, const CVec4& psi0, const RunOptions& options,
                              std::uint64_t seed, std::uint64_t stream = 0);
TrajectoryRecord run_diffusive_sse(const ModelOperators& ops, const CVec4& psi0, const RunOptions& options,
                                   std::uint64_t seed, std::uint64_t stream = 0, const DiffusiveGuards& guards = {});
TrajectoryRecord run_sme(const ModelOperators& ops, const DensityOp& rho0, const RunOptions& options,
                         std::uint64_t seed, std::uint64_t stream, double eta_l, double eta_r,
                         const DiffusiveGuards& guards = {});

// Heralded windows from the left-jump log. A window opens at a left jump whose
// post-jump state is closer to |+i> than to |gg> and closes at the next left
// jump. A jump landing closer to |gg> ends a |gg> -> ... -> |gg> cycle and
// resets the parity; odd jumps in a cycle should land on |+i>, even ones on |gg>.
struct HeraldWindow {
    double t_open = 0.0;
    double t_close = 0.0;
    bool closed = false;
};

struct HeraldReport {
    std::vector<HeraldWindow> windows;
    std::size_t odd_jumps = 0;
    std::size_t even_jumps = 0;
    std::size_t odd_failures = 0;
    std::size_t even_failures = 0;
    double min_odd_fidelity = 1.0;   // fidelity with |+i> after odd jumps
    double min_even_fidelity = 1.0;  // fidelity with |gg> after even jumps
    std::vector<double> odd_entanglement;  // entanglement right after each odd jump
    double t_end = 0.0;

    std::vector<double> closed_durations() const;
    // Time spent inside windows, counting a window still open at t_end up to t_end.
    double exposure() const;
};

HeraldReport analyze_heralding(const TrajectoryRecord& record, double fidelity_threshold = 0.999);

struct LeakageRow {
    double alpha = 0.0;
    double max_minus_i = 0.0;  // largest |-i> population over one window
};

struct LeakageReport {
    std::vector<LeakageRow> rows;
    bool non_increasing = true;
};

struct LeakageOptions {
    double window = 1.0;  // in units of 1/Gamma
    double dt = 5e-5;     // clipped to dt_max for each alpha
    bool include_exchange = true;
};

// Starts at |+i> and follows the no-click, zero-noise diffusive flow for one
// mean window, recording the |-i> population. Requires kL = pi/2 and an
// increasing alpha list with every entry >= 20.
LeakageReport hqq_suppression_check(const ModelParams& base, std::span<const double> alphas,
                                    const LeakageOptions& options = {});

// |<-i| exp(-i H_qq t) |+i>|^2 with the drive off, by RK4 on the Schrodinger
// equation with `steps` steps.
double exchange_transfer(const ModelParams& params, double duration, std::size_t steps);

}  // namespace bellherald
