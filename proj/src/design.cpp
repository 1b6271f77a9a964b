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

#include "chainsmith/design.hpp"

#include <cmath>

#include "chainsmith/spectral.hpp"

namespace chainsmith {

Vec alternating_signs(int n) {
    Vec s(n);
    for (int k = 0; k < n; k++) {
        s[k] = k % 2 == 0 ? 1.0 : -1.0;
    }
    return s;
}

Vec synthesis_amplitudes(const Mat &basis, const Vec &weights) {
    Vec sq = alternating_signs(static_cast<int>(weights.size())).cwiseProduct(weights.cwiseSqrt());
    return basis.transpose() * sq;
}

Vec amplitude_derivative(const Mat &basis, const Vec &weights, const Vec &dw) {
    const Eigen::Index n = weights.size();
    Vec q = weights.cwiseSqrt();
    Vec dq = dw.cwiseQuotient(2 * q);
    Vec s = alternating_signs(static_cast<int>(n));
    Mat c = basis.transpose() * dw.cwiseQuotient(2 * weights).asDiagonal() * basis;
    Mat lower = c.triangularView<Eigen::StrictlyLower>();
    Mat omega = lower - lower.transpose();
    Vec a = basis.transpose() * s.cwiseProduct(q);
    return -omega * a + basis.transpose() * s.cwiseProduct(dq);
}

Mat amplitude_jacobian(const Mat &basis, const Vec &weights, const Mat &directions) {
    Mat jac(weights.size(), directions.cols());
    for (Eigen::Index i = 0; i < directions.cols(); i++) {
        jac.col(i) = amplitude_derivative(basis, weights, directions.col(i));
    }
    return jac;
}

std::vector<int> gauge_signs(const Vec &amplitudes, const Vec &target, double tol) {
    const Eigen::Index n = amplitudes.size();
    int global = 1;
    if (std::abs(target[0]) > tol && std::abs(amplitudes[0]) > tol && target[0] * amplitudes[0] < 0) {
        global = -1;
    }
    std::vector<int> d(n, 1);
    for (Eigen::Index j = 1; j < n; j++) {
        if (std::abs(target[j]) > tol && std::abs(amplitudes[j]) > tol) {
            d[j] = global * (target[j] * amplitudes[j] > 0 ? 1 : -1);
        } else {
            d[j] = d[j - 1];
        }
    }
    return d;
}

DesignResult finish_design(
    const LanczosResult &built,
    const Vec &weights,
    const ChainSpec &reference,
    const TargetState &target,
    DesignDiagnostics diagnostics) {
    Vec a = synthesis_amplitudes(built.basis, weights);
    ChainSpec chain = built.chain.gauged(gauge_signs(a, target.amplitudes));
    Overlap ov = fidelity(chain, target);
    BetaTable table = beta_table(chain, reference);
    return DesignResult{
        chain, target, ov.fidelity, ov.phase, table.first_column(), weights, std::move(diagnostics)};
}

}  // namespace chainsmith
