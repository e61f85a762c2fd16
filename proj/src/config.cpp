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

#include "bellherald/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "bellherald/errors.hpp"

namespace bellherald {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool parse_double(std::string_view s, double& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

struct Entry {
    std::string value;
    int line;
};

class Reader {
   public:
    Reader(const std::string& key, const Entry& e) : key_(key), e_(e) {}

    double real() const {
        double v;
        if (!parse_double(e_.value, v)) fail("expected a number, got '" + e_.value + "'");
        return v;
    }
    double positive() const {
        const double v = real();
        if (!(v > 0.0)) fail("must be > 0");
        return v;
    }
    double unit_interval() const {
        const double v = real();
        if (!(v >= 0.0 && v <= 1.0)) fail("must lie in [0, 1], got " + e_.value);
        return v;
    }
    std::uint64_t unsigned_int(std::uint64_t min_value) const {
        std::uint64_t v;
        const char* end = e_.value.data() + e_.value.size();
        auto [ptr, ec] = std::from_chars(e_.value.data(), end, v);
        if (ec != std::errc() || ptr != end) fail("expected a non-negative integer, got '" + e_.value + "'");
        if (v < min_value) fail("must be >= " + std::to_string(min_value));
        return v;
    }
    double phase() const {
        try {
            return parse_phase(e_.value);
        } catch (const Error&) {
            fail("expected radians or '<x>pi', got '" + e_.value + "'");
        }
        return 0.0;
    }
    bool boolean() const {
        const std::string v = lower(e_.value);
        if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
        if (v == "0" || v == "false" || v == "no" || v == "off") return false;
        fail("expected a boolean, got '" + e_.value + "'");
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(key_, e_.line, what); }

   private:
    const std::string& key_;
    const Entry& e_;
};

EngineKind parse_engine(const Reader& r, const std::string& value) {
    static const std::map<std::string, EngineKind> names = {
        {"jump", EngineKind::jump}, {"diffusive", EngineKind::diffusive}, {"sme", EngineKind::sme},
        {"me", EngineKind::me},     {"steady", EngineKind::steady},       {"g2", EngineKind::g2},
        {"check", EngineKind::check}};
    const auto it = names.find(lower(value));
    if (it == names.end()) r.fail("unknown engine '" + value + "' (jump|diffusive|sme|me|steady|g2|check)");
    return it->second;
}

}  // namespace

std::string_view to_string(EngineKind engine) {
    switch (engine) {
        case EngineKind::jump:
            return "jump";
        case EngineKind::diffusive:
            return "diffusive";
        case EngineKind::sme:
            return "sme";
        case EngineKind::me:
            return "me";
        case EngineKind::steady:
            return "steady";
        case EngineKind::g2:
            return "g2";
        case EngineKind::check:
            return "check";
    }
    return "unknown";
}

Engine RunConfig::unraveling() const {
    switch (engine) {
        case EngineKind::jump:
            return Engine::jump;
        case EngineKind::diffusive:
            return Engine::diffusive;
        case EngineKind::sme:
            return Engine::sme;
        default:
            throw ConfigError("engine", 0,
                              "'" + std::string(to_string(engine)) + "' is not a trajectory engine (jump|diffusive|sme)");
    }
}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.t_end = t_end;
    o.dt = dt;
    o.sample_stride = sample_stride;
    return o;
}

unsigned RunConfig::resolved_workers() const {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

double parse_phase(std::string_view text) {
    std::string s = lower(trim(text));
    double factor = 1.0;
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        factor = std::numbers::pi;
        s = trim(s.substr(0, s.size() - 2));
        if (s.empty() || s == "+") return factor;
        if (s == "-") return -factor;
        if (s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    }
    double v;
    if (!parse_double(s, v)) throw PreconditionError("cannot parse phase '" + std::string(text) + "'");
    return v * factor;
}

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
    static const std::vector<std::string> known = {"engine", "g",       "alpha",         "theta",  "kl",
                                                   "eta_l",  "eta_r",   "t_end",         "dt",     "sample_stride",
                                                   "n_traj", "seed",    "out",           "workers", "emit_svg"};
    std::map<std::string, Entry> entries;

    auto add = [&](const std::string& raw_key, const std::string& value, int line, bool allow_replace) {
        const std::string key = lower(trim(raw_key));
        if (key.empty()) throw ConfigError("", line, "missing key before '='");
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(key, line, "unknown key");
        if (!allow_replace && entries.count(key)) throw ConfigError(key, line, "duplicate key");
        entries[key] = {trim(value), line};
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        if (trim(raw).empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos) throw ConfigError(trim(raw), line_no, "expected 'key = value'");
        add(raw.substr(0, eq), raw.substr(eq + 1), line_no, false);
    }
    for (const auto& [k, v] : overrides) add(k, v, 0, true);

    RunConfig cfg;
    const auto engine_it = entries.find("engine");
    if (engine_it == entries.end() || engine_it->second.value.empty())
        throw ConfigError("engine", engine_it == entries.end() ? 0 : engine_it->second.line, "missing required key");

    for (const auto& [key, entry] : entries) {
        const Reader r(key, entry);
        if (key == "engine") cfg.engine = parse_engine(r, entry.value);
        else if (key == "g") cfg.params.g = r.positive();
        else if (key == "alpha") {
            cfg.params.alpha_mag = r.real();
            if (!(cfg.params.alpha_mag >= 0.0)) r.fail("must be >= 0");
        } else if (key == "theta") cfg.params.theta = r.phase();
        else if (key == "kl") cfg.params.kl = r.phase();
        else if (key == "eta_l") cfg.params.eta_l = r.unit_interval();
        else if (key == "eta_r") cfg.params.eta_r = r.unit_interval();
        else if (key == "t_end") cfg.t_end = r.positive();
        else if (key == "dt") cfg.dt = r.positive();
        else if (key == "sample_stride") cfg.sample_stride = r.unsigned_int(1);
        else if (key == "n_traj") cfg.n_traj = r.unsigned_int(1);
        else if (key == "seed") cfg.seed = r.unsigned_int(0);
        else if (key == "out") {
            if (entry.value.empty()) r.fail("must not be empty");
            cfg.out = entry.value;
        } else if (key == "workers") cfg.workers = static_cast<unsigned>(r.unsigned_int(1));
        else if (key == "emit_svg") cfg.emit_svg = r.boolean();
    }
    if (!std::isfinite(cfg.params.g) || !std::isfinite(cfg.params.alpha_mag))
        throw ConfigError("", 0, "non-finite model parameter");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

void apply_environment(RunConfig& config) {
    const char* env = std::getenv("BELLHERALD_WORKERS");
    if (env == nullptr || *env == '\0') return;
    const std::string v = trim(env);
    unsigned long n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || ptr != v.data() + v.size() || n == 0)
        throw ConfigError("BELLHERALD_WORKERS", 0, "expected a positive integer, got '" + v + "'");
    config.workers = static_cast<unsigned>(n);
}

}  // namespace bellherald
