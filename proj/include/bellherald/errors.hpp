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

#include <stdexcept>
#include <string>

namespace bellherald {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (non-Hermitian operator, bad trace, ...).
class PreconditionError : public Error {
   public:
    using Error::Error;
};

// A numerical validity guard tripped: step size too large, drive below the
// diffusive-regime threshold, jump probability per step above the cap.
class GuardError : public Error {
   public:
    using Error::Error;
};

// The computation itself failed: no convergence, degenerate null space,
// trace collapse.
class NumericalError : public Error {
   public:
    using Error::Error;
};

class ConfigError : public Error {
   public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : Error(format(key, line, what)), key_(key), line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

   private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string msg = "config error";
        if (line > 0) msg += " at line " + std::to_string(line);
        if (!key.empty()) msg += " (key '" + key + "')";
        return msg + ": " + what;
    }

    std::string key_;
    int line_;
};

}  // namespace bellherald
