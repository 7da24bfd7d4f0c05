// Copyright 2026 The hyperq Authors
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

#include <cmath>
#include <sstream>
#include <string>

namespace hyperq {

enum class Verdict { kContractive, kViolated, kInconclusive, kUnknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kContractive: return "CONTRACTIVE";
    case Verdict::kViolated: return "VIOLATED";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
    case Verdict::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

/** One inequality instance: passes iff rhs - lhs >= -tolerance. */
struct InequalityReport {
  std::string name;
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool pass = false;
  double tolerance = 0.0;

  static InequalityReport make(std::string name, std::string inputs, double lhs, double rhs,
                               double tolerance) {
    InequalityReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.lhs = lhs;
    r.rhs = rhs;
    r.gap = rhs - lhs;
    r.tolerance = tolerance;
    r.pass = std::isfinite(r.gap) && r.gap >= -tolerance;
    return r;
  }
};

}  // namespace hyperq
