// Copyright 2026 The spu Authors
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
#include <string_view>

namespace spu {

enum class ErrorKind {
  InvalidModel,
  OracleSize,
  InvalidObservable,
  Layout,
  DegenerateState,
  Range,
  DeadBranch,
  Indeterminate,
  InsufficientData,
  InvalidPartition,
  NonConverged,
  CostModel,
  Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::OracleSize: return "oracle-size";
    case ErrorKind::InvalidObservable: return "invalid-observable";
    case ErrorKind::Layout: return "layout";
    case ErrorKind::DegenerateState: return "degenerate-state";
    case ErrorKind::Range: return "range";
    case ErrorKind::DeadBranch: return "dead-branch";
    case ErrorKind::Indeterminate: return "indeterminate-estimate";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidPartition: return "invalid-partition";
    case ErrorKind::NonConverged: return "non-converged";
    case ErrorKind::CostModel: return "cost-model";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

/// Every failure raised by the library carries a category so front-ends can
/// map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace spu
