// Copyright 2026 The Approachlab Authors.
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

#ifndef APPROACHLAB_VERIFY_H_
#define APPROACHLAB_VERIFY_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace approachlab {

// One verified bound or identity: the empirical quantity, the pinned
// threshold it is checked against, and the outcome.
struct CriterionResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string details;
};

// The named verification suites, each running its Monte-Carlo experiments at
// the tolerances fixed below.
std::vector<CriterionResult> VerifyLln();
std::vector<CriterionResult> VerifyApproachRates();
std::vector<CriterionResult> VerifyRegretRates();
std::vector<CriterionResult> VerifyCalibrationRates();
std::vector<CriterionResult> VerifyEquilibria();
std::vector<CriterionResult> VerifyOracles();
std::vector<CriterionResult> VerifyAll();

// Dispatch by suite name ("lln", "approach-rates", "regret-rates",
// "calibration-rates", "equilibria", "oracles", "all"); throws
// std::invalid_argument for unknown names.
std::vector<CriterionResult> RunVerifySuite(const std::string& suite);

// Prints one pass/fail line per criterion; returns true when all passed.
bool ReportResults(const std::vector<CriterionResult>& results,
                   std::ostream& out);

}  // namespace approachlab

#endif  // APPROACHLAB_VERIFY_H_
