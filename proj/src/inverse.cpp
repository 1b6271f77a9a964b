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

#include "chainsmith/inverse.hpp"

#include <cmath>
#include <string>

#include "chainsmith/errors.hpp"

namespace chainsmith {

namespace {

void check_decreasing(const Vec &eigenvalues) {
    if (eigenvalues.size() < 1) {
        throw InvalidSpectrum("empty spectrum");
    }
    if (!eigenvalues.allFinite()) {
        throw InvalidSpectrum("spectrum must be finite");
    }
    for (Eigen::Index k = 0; k + 1 < eigenvalues.size(); k++) {
        if (!(eigenvalues[k] > eigenvalues[k + 1])) {
            throw InvalidSpectrum("eigenvalues must be strictly decreasing (index " + std::to_string(k + 1) + ")");
        }
    }
}

}  // namespace

SpectralData::SpectralData(Vec lam, Vec w) : eigenvalues(std::move(lam)), weights(std::move(w)) {
    check_decreasing(eigenvalues);
    if (weights.size() != eigenvalues.size()) {
        throw InvalidWeights("weights and eigenvalues differ in length");
    }
    for (Eigen::Index k = 0; k < weights.size(); k++) {
        if (!(weights[k] > 0) || !std::isfinite(weights[k])) {
            throw InvalidWeights("weight " + std::to_string(k + 1) + " is not positive");
        }
    }
    if (std::abs(weights.sum() - 1) > 1e-12) {
        throw InvalidWeights("weights sum to " + std::to_string(weights.sum()) + ", not 1");
    }
}

LanczosResult lanczos_with_basis(const SpectralData &data, const Tolerances &tol) {
    const Eigen::Index n = data.eigenvalues.size();
    const Vec &lam = data.eigenvalues;
    double lam_max2 = lam.cwiseAbs2().maxCoeff();
    double floor = tol.lanczos_breakdown * std::max(lam_max2, 1e-300);

    Mat q = Mat::Zero(n, n);
    Vec b(n);
    Vec j(std::max<Eigen::Index>(n - 1, 0));
    q.col(0) = data.weights.cwiseSqrt();
    q.col(0) /= q.col(0).norm();
    for (Eigen::Index m = 0; m < n; m++) {
        Vec lq = lam.cwiseProduct(q.col(m));
        b[m] = q.col(m).dot(lq);
        if (m + 1 == n) {
            break;
        }
        Vec r = lq - b[m] * q.col(m);
        if (m > 0) {
            r -= j[m - 1] * q.col(m - 1);
        }
        // Two passes of classical Gram-Schmidt against every earlier vector.
        for (int pass = 0; pass < 2; pass++) {
            r -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * r);
        }
        double j2 = r.squaredNorm();
        if (j2 <= floor) {
            throw NumericalBreakdown(
                "Lanczos breakdown at step " + std::to_string(m + 1) + " (J^2 = " + std::to_string(j2) + ")");
        }
        j[m] = std::sqrt(j2);
        q.col(m + 1) = r / j[m];
    }
    return LanczosResult{ChainSpec(b, j), q};
}

ChainSpec lanczos_reconstruct(const SpectralData &data, const Tolerances &tol) {
    return lanczos_with_basis(data, tol).chain;
}

SpectralData persymmetric_weights(const Vec &eigenvalues) {
    check_decreasing(eigenvalues);
    const Eigen::Index n = eigenvalues.size();
    Vec logw(n);
    for (Eigen::Index k = 0; k < n; k++) {
        double s = 0;
        for (Eigen::Index m = 0; m < n; m++) {
            if (m != k) {
                s -= std::log(std::abs(eigenvalues[k] - eigenvalues[m]));
            }
        }
        logw[k] = s;
    }
    Vec w = (logw.array() - logw.maxCoeff()).exp();
    w /= w.sum();
    return SpectralData(eigenvalues, w);
}

ChainSpec chain_from_v1(const Vec &v1, const Vec &eigenvalues, const Tolerances &tol) {
    if (v1.size() != eigenvalues.size()) {
        throw InvalidWeights("v1 and spectrum differ in length");
    }
    for (Eigen::Index k = 0; k < v1.size(); k++) {
        if (!(v1[k] > tol.weight_floor)) {
            throw InvalidWeights("entry " + std::to_string(k + 1) + " of v1 is not positive");
        }
    }
    double total = v1.sum();
    if (std::abs(total - 1) > 1e-9) {
        throw InvalidWeights("entries of v1 sum to " + std::to_string(total) + ", not 1");
    }
    return lanczos_reconstruct(SpectralData(eigenvalues, v1 / total), tol);
}

}  // namespace chainsmith
