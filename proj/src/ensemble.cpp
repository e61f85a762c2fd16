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

#include "bellherald/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "bellherald/entangle.hpp"
#include "bellherald/errors.hpp"
#include "bellherald/output.hpp"

namespace bellherald {

namespace {

double standard_error(double sum, double sum_sq, std::size_t n) {
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
}

class Accumulator {
   public:
    Accumulator(double t_end, const EnsembleOptions& options) : t_end_(t_end), options_(options) {
        hist_.assign(std::max<std::size_t>(options.histogram_bins, 1), 0);
    }

    void add(const TrajectoryRecord& rec) {
        if (n_ == 0) {
            engine_ = rec.engine;
            t_ = rec.t_grid();
            const std::size_t m = t_.size();
            rho_sum_.assign(m, CMat4{});
            comp_sq_.assign(m, {});
            pop_sum_.assign(m, {});
            pop_sq_.assign(m, {});
            ent_sum_.assign(m, 0.0);
            ent_sq_.assign(m, 0.0);
        } else if (rec.samples.size() != t_.size()) {
            throw PreconditionError("ensemble records have different time grids");
        }
        const bool have_rho = !rec.rho.empty();
        const bool have_psi = !rec.psi.empty();
        if (!have_rho && !have_psi) throw PreconditionError("ensemble reduction needs recorded states");

        for (std::size_t k = 0; k < t_.size(); ++k) {
            const CMat4 rho = have_rho ? rec.rho[k] : outer(rec.psi[k], rec.psi[k]);
            rho_sum_[k] += rho;
            for (std::size_t e = 0; e < 16; ++e) {
                const cplx z = rho.a[e];
                comp_sq_[k][2 * e] += z.real() * z.real();
                comp_sq_[k][2 * e + 1] += z.imag() * z.imag();
            }
            const auto& s = rec.samples[k];
            const std::array<double, 4> p = {s.pops.ee, s.pops.plus_i, s.pops.minus_i, s.pops.gg};
            for (int i = 0; i < 4; ++i) {
                pop_sum_[k][i] += p[i];
                pop_sq_[k][i] += p[i] * p[i];
            }
            ent_sum_[k] += s.entanglement;
            ent_sq_[k] += s.entanglement * s.entanglement;
        }

        const double width = t_end_ / static_cast<double>(hist_.size());
        for (const auto& j : rec.jumps) {
            if (j.channel != Channel::left) continue;
            auto bin = static_cast<std::size_t>(j.time / width);
            hist_[std::min(bin, hist_.size() - 1)] += 1;
        }

        const HeraldReport herald = analyze_heralding(rec, options_.fidelity_threshold);
        for (double d : herald.closed_durations()) {
            ++windows_;
            win_sum_ += d;
        }
        exposure_ += herald.exposure();
        odd_ += herald.odd_jumps;
        odd_fail_ += herald.odd_failures;
        min_odd_ = std::min(min_odd_, herald.min_odd_fidelity);
        for (double s : herald.odd_entanglement) herald_ent_sum_ += s;
        ++n_;
    }

    EnsembleStats finish() const {
        EnsembleStats st;
        st.engine = engine_;
        st.n_traj = n_;
        st.t = t_;
        const double inv = n_ > 0 ? 1.0 / static_cast<double>(n_) : 0.0;
        const std::size_t m = t_.size();
        st.mean_rho.resize(m);
        st.se_rho.resize(m);
        st.mean_pops.resize(m);
        st.se_pops.resize(m);
        st.mean_entanglement.resize(m);
        st.se_entanglement.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            st.mean_rho[k] = inv * rho_sum_[k];
            for (std::size_t e = 0; e < 16; ++e) {
                const cplx z = rho_sum_[k].a[e];
                st.se_rho[k][2 * e] = standard_error(z.real(), comp_sq_[k][2 * e], n_);
                st.se_rho[k][2 * e + 1] = standard_error(z.imag(), comp_sq_[k][2 * e + 1], n_);
            }
            for (int i = 0; i < 4; ++i) {
                st.mean_pops[k][i] = pop_sum_[k][i] * inv;
                st.se_pops[k][i] = standard_error(pop_sum_[k][i], pop_sq_[k][i], n_);
            }
            st.mean_entanglement[k] = ent_sum_[k] * inv;
            st.se_entanglement[k] = standard_error(ent_sum_[k], ent_sq_[k], n_);
        }
        st.left_jump_histogram = hist_;
        st.histogram_bin_width = t_end_ / static_cast<double>(hist_.size());
        st.window_count = windows_;
        if (windows_ > 0) {
            st.mean_window_duration = exposure_ / static_cast<double>(windows_);
            st.mean_closed_duration = win_sum_ / static_cast<double>(windows_);
            st.se_window_duration = st.mean_window_duration / std::sqrt(static_cast<double>(windows_));
        }
        st.odd_jump_count = odd_;
        st.odd_failures = odd_fail_;
        st.min_odd_fidelity = min_odd_;
        if (odd_ > 0) st.mean_herald_entanglement = herald_ent_sum_ / static_cast<double>(odd_);
        return st;
    }

   private:
    double t_end_;
    const EnsembleOptions& options_;
    std::size_t n_ = 0;
    Engine engine_ = Engine::diffusive;
    std::vector<double> t_;
    std::vector<CMat4> rho_sum_;
    std::vector<std::array<double, 32>> comp_sq_;
    std::vector<std::array<double, 4>> pop_sum_, pop_sq_;
    std::vector<double> ent_sum_, ent_sq_;
    std::vector<std::size_t> hist_;
    std::size_t windows_ = 0;
    double win_sum_ = 0.0, exposure_ = 0.0;
    std::size_t odd_ = 0, odd_fail_ = 0;
    double min_odd_ = 1.0;
    double herald_ent_sum_ = 0.0;
};

TrajectoryRecord run_one(const RunConfig& config, const ModelOperators& ops, std::uint64_t index) {
    RunOptions opt = config.run_options();
    opt.record_noise = false;
    DiffusiveGuards guards;
    guards.min_alpha = config.min_alpha;
    const CVec4 psi0 = CVec4::basis(3);
    switch (config.unraveling()) {
        case Engine::jump:
            return run_jump_sse(ops, psi0, opt, config.seed, index);
        case Engine::diffusive:
            return run_diffusive_sse(ops, psi0, opt, config.seed, index, guards);
        case Engine::sme:
            return run_sme(ops, DensityOp::pure(psi0), opt, config.seed, index, config.params.eta_l,
                           config.params.eta_r, guards);
    }
    throw PreconditionError("unknown engine");
}

[[noreturn]] void rethrow_with_index(const std::exception_ptr& error, std::size_t index) {
    const std::string prefix = "trajectory " + std::to_string(index) + ": ";
    try {
        std::rethrow_exception(error);
    } catch (const GuardError& e) {
        throw GuardError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    }
}

}  // namespace

EnsembleStats reduce_records(const std::vector<TrajectoryRecord>& records, double t_end,
                             const EnsembleOptions& options) {
    Accumulator acc(t_end, options);
    for (const auto& r : records) acc.add(r);
    return acc.finish();
}

EnsembleStats run_ensemble(const RunConfig& config, const EnsembleOptions& options) {
    config.params.validate();
    const Engine engine = config.unraveling();
    const ModelOperators ops = build_operators(config.params);
    const unsigned workers = std::max(1u, config.resolved_workers());
    const std::size_t n = config.n_traj;
    const std::size_t block = std::max<std::size_t>(64, 8 * workers);

    Accumulator acc(config.t_end, options);
    for (std::size_t start = 0; start < n; start += block) {
        const std::size_t count = std::min(block, n - start);
        std::vector<std::optional<TrajectoryRecord>> results(count);
        std::vector<std::exception_ptr> errors(count);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    results[i] = run_one(config, ops, start + i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
        if (threads <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (errors[i]) rethrow_with_index(errors[i], start + i);
            const TrajectoryRecord& rec = *results[i];
            acc.add(rec);
            const std::size_t index = start + i;
            if (options.write_files && index < options.trajectory_csv_limit)
                write_trajectory_csv(rec, config.out / ("trajectory_" + std::to_string(index) + ".csv"));
            if (options.on_record) options.on_record(index, rec);
        }
    }

    EnsembleStats stats = acc.finish();
    if (options.write_files) {
        write_stats_csv(stats, config.out / ("ensemble_" + std::string(to_string(engine)) + ".csv"));
        if (config.emit_svg) {
            std::vector<SvgSeries> series(4);
            const char* names[4] = {"ee", "+i", "-i", "gg"};
            for (int i = 0; i < 4; ++i) {
                series[i].name = names[i];
                for (const auto& p : stats.mean_pops) series[i].values.push_back(p[i]);
            }
            write_svg_chart(config.out / "ensemble_populations.svg", "mean populations", stats.t, series);
        }
    }
    return stats;
}

MeSolution reference_solution(const RunConfig& config) {
    const ModelOperators ops = build_operators(config.params);
    const double limit = dt_max(config.params);
    const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(config.dt / limit * (1.0 - 1e-12))));
    return integrate_me(ops, DensityOp{}, config.t_end, config.dt / static_cast<double>(sub),
                        config.sample_stride * sub);
}

ConsistencyReport compare_with_reference(const EnsembleStats& stats, const MeSolution& reference, double n_se,
                                         double floor) {
    if (stats.t.size() != reference.t.size())
        throw PreconditionError("ensemble and reference grids differ (" + std::to_string(stats.t.size()) + " vs " +
                                std::to_string(reference.t.size()) + " samples)");
    ConsistencyReport rep;
    for (std::size_t k = 0; k < stats.t.size(); ++k) {
        if (std::abs(stats.t[k] - reference.t[k]) > 1e-9 * std::max(1.0, stats.t[k]))
            throw PreconditionError("ensemble and reference sample times differ");
        const CMat4& ref = reference.states[k].mat();
        for (std::size_t e = 0; e < 16; ++e) {
            const cplx d = stats.mean_rho[k].a[e] - ref.a[e];
            const double dev[2] = {std::abs(d.real()), std::abs(d.imag())};
            for (int part = 0; part < 2; ++part) {
                const double se = stats.se_rho[k][2 * e + part];
                if (dev[part] > n_se * se + floor) ++rep.violations;
                rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev[part]);
                // Deviations under the absolute floor are roundoff, not Monte Carlo error.
                const double z = dev[part] <= floor ? 0.0 : (se > 0.0 ? dev[part] / se : INFINITY);
                if (z > rep.max_deviation_se) {
                    rep.max_deviation_se = z;
                    rep.worst_time = stats.t[k];
                }
            }
        }
    }
    rep.pass = rep.violations == 0;
    rep.stats = stats;
    return rep;
}

ConsistencyReport consistency_check(const RunConfig& config, double n_se, double floor) {
    EnsembleOptions opt;
    opt.write_files = false;
    const EnsembleStats stats = run_ensemble(config, opt);
    return compare_with_reference(stats, reference_solution(config), n_se, floor);
}

}  // namespace bellherald
