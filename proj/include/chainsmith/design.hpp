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

#ifndef CHAINSMITH_DESIGN_HPP
#define CHAINSMITH_DESIGN_HPP

#include <string>
#include <vector>

#include "chainsmith/chain.hpp"
#include "chainsmith/inverse.hpp"
#include "chainsmith/pst.hpp"

namespace chainsmith {

struct DesignDiagnostics {
    std::string method;
    int iterations = 0;
    /// Final residual norm of whichever equations the designer solved.
    double residual = 0;
    /// Designer-specific free parameters at the solution (e.g. beta_2, or B_1 and J_1).
    std::vector<double> parameters;
    std::string notes;
};

struct DesignResult {
    ChainSpec chain;
    TargetState target;
    double fidelity;
    double phase;
    /// beta^{(1)}_m against the reference chain.
    Vec beta_first_column;
    /// First-row eigenvector weights lambda_{n,1}^2.
    Vec weights;
    DesignDiagnostics diagnostics;
};

/// (-1)^{k+1} for k = 1..n.
Vec alternating_signs(int n);

/// Real output amplitudes a_j = sum_k s_k sqrt(w_k) basis(k, j) of a chain on a
/// PST spectrum, with the global phase exp(-i lambda_1 t0) removed.
Vec synthesis_amplitudes(const Mat &basis, const Vec &weights);

/// Change in synthesis_amplitudes for a first-order change dw of the weights.
/// dw must sum to zero. Obtained by differentiating the Lanczos basis: the
/// antisymmetric generator is the strictly-lower part of
/// basis^T diag(dw / 2w) basis, minus its transpose.
Vec amplitude_derivative(const Mat &basis, const Vec &weights, const Vec &dw);

/// Column i is amplitude_derivative along directions.col(i).
Mat amplitude_jacobian(const Mat &basis, const Vec &weights, const Mat &directions);

/// Site signs d (d_1 = +1) such that conjugating by diag(d) aligns the signs
/// of the amplitudes with those of the target, up to a global sign.
std::vector<int> gauge_signs(const Vec &amplitudes, const Vec &target, double tol = 1e-9);

/// Gauge-fixes a positive-gauge chain, simulates it independently and fills
/// in the remaining DesignResult fields.
DesignResult finish_design(
    const LanczosResult &built,
    const Vec &weights,
    const ChainSpec &reference,
    const TargetState &target,
    DesignDiagnostics diagnostics);

}  // namespace chainsmith

#endif
