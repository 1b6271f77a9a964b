// Copyright 2026 The chainsmith Authors
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

#ifndef CHAINSMITH_NUMERIC_HPP
#define CHAINSMITH_NUMERIC_HPP

#include <optional>
#include <vector>

#include "chainsmith/design.hpp"
#include "chainsmith/spectral.hpp"

namespace chainsmith {

struct SolverConfig {
    int max_iterations = 200;
    /// Target for 1 - fidelity.
    double residual_tol = 1e-12;
    /// Scales every Gauss-Newton step before backtracking.
    double damping = 1.0;
    /// Restrict to beta^{(n)}_m = 0 for n+m odd (zero fields).
    bool parity = false;
    /// Defaults to the linear spectrum of the target's length.
    std::optional<PstSpectrum> spectrum;
};

/// Geometric weights w_n = r^{n-1} (1-r) / (1-r^N) with r chosen by bisection
/// so that the amplitude left on site 1 equals alpha1.
Vec initial_guess(int n, double alpha1);

/// The ratio r used by initial_guess.
double initial_guess_ratio(int n, double alpha1);

struct RefineTrace {
    /// 1 - fidelity after each accepted step, starting with the initial point.
    std::vector<double> infidelity;
};

/// Gauss-Newton on log-weights (weights = softmax) with the spectrum held
/// fixed, so every iterate is isospectral by construction.
DesignResult refine(const TargetState &target, const Vec &start, const SolverConfig &config = {}, RefineTrace *trace = nullptr);

struct MomentFields {
    Vec fields;
    Vec couplings_squared;
};

/// Fields and squared couplings from the moments <1|H~^p|beta^{(n)}>, which
/// equal <1|H^p|n> for the designed chain.
MomentFields moment_fields(const BetaTable &table, const ChainSpec &reference);

}  // namespace chainsmith

#endif
