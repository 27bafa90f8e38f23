// Copyright 2026 The gaussnc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussnc {

/// Failure categories. The first group describes bad or unphysical input
/// (the CLI maps them to exit code 2); the second group describes numerical
/// trouble (exit code 3).
enum class ErrorKind {
    // input / physics
    InvalidArgument,
    NotPositive,
    UncertaintyViolated,
    DistributionValued,
    Marginal,
    VacuumDegenerate,
    Inconclusive,
    // numerics
    Divergence,
    NonConvergence,
    Overflow,
    NegativeProbability,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::UncertaintyViolated: return "UncertaintyViolated";
        case ErrorKind::DistributionValued: return "DistributionValued";
        case ErrorKind::Marginal: return "Marginal";
        case ErrorKind::VacuumDegenerate: return "VacuumDegenerate";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::Divergence: return "Divergence";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::NegativeProbability: return "NegativeProbability";
    }
    return "Unknown";
}

constexpr bool is_numerical(ErrorKind kind) {
    return kind == ErrorKind::Divergence || kind == ErrorKind::NonConvergence ||
           kind == ErrorKind::Overflow || kind == ErrorKind::NegativeProbability;
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace gaussnc
