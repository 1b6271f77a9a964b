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

#include "chainsmith/chain.hpp"

#include <cmath>
#include <string>

#include "chainsmith/errors.hpp"

namespace chainsmith {

ChainSpec::ChainSpec(Vec fields, Vec couplings) : fields_(std::move(fields)), couplings_(std::move(couplings)) {
    if (fields_.size() < 1) {
        throw InvalidChain("chain needs at least one site");
    }
    if (couplings_.size() != fields_.size() - 1) {
        throw InvalidChain(
            "expected " + std::to_string(fields_.size() - 1) + " couplings, got " + std::to_string(couplings_.size()));
    }
    if (!fields_.allFinite() || !couplings_.allFinite()) {
        throw InvalidChain("chain entries must be finite");
    }
    for (Eigen::Index k = 0; k < couplings_.size(); k++) {
        if (couplings_[k] == 0) {
            throw InvalidChain("coupling J_" + std::to_string(k + 1) + " is zero, which splits the chain");
        }
    }
}

ChainSpec ChainSpec::with_zero_fields(Vec couplings) {
    Vec fields = Vec::Zero(couplings.size() + 1);
    return ChainSpec(std::move(fields), std::move(couplings));
}

Mat ChainSpec::dense() const {
    int n = size();
    Mat h = Mat::Zero(n, n);
    h.diagonal() = fields_;
    for (int k = 0; k + 1 < n; k++) {
        h(k, k + 1) = couplings_[k];
        h(k + 1, k) = couplings_[k];
    }
    return h;
}

double ChainSpec::max_abs_coupling() const {
    return couplings_.size() == 0 ? 0.0 : couplings_.cwiseAbs().maxCoeff();
}

double ChainSpec::coupling_product() const {
    double p = 1;
    for (double j : couplings_) {
        p *= std::abs(j);
    }
    return p;
}

bool ChainSpec::is_mirror_symmetric(double tol) const {
    int n = size();
    for (int k = 0; k < n; k++) {
        if (std::abs(fields_[k] - fields_[n - 1 - k]) > tol) {
            return false;
        }
    }
    for (int k = 0; k + 1 < n; k++) {
        if (std::abs(couplings_[k] - couplings_[n - 2 - k]) > tol) {
            return false;
        }
    }
    return true;
}

ChainSpec ChainSpec::gauged(const std::vector<int> &signs) const {
    if (static_cast<int>(signs.size()) != size()) {
        throw InvalidChain("gauge sign vector has the wrong length");
    }
    Vec j = couplings_;
    for (int k = 0; k + 1 < size(); k++) {
        j[k] *= signs[k] * signs[k + 1];
    }
    return ChainSpec(fields_, j);
}

ChainSpec ChainSpec::positive_gauge() const {
    return ChainSpec(fields_, couplings_.cwiseAbs());
}

TargetState::TargetState(Vec amps, int input, double time) : amplitudes(std::move(amps)), input_site(input), t0(time) {
    int n = size();
    if (n < 1) {
        throw InvalidTarget("target has no sites");
    }
    if (!amplitudes.allFinite()) {
        throw InvalidTarget("target amplitudes must be finite");
    }
    if (input_site < 1 || input_site > n) {
        throw InvalidTarget("input site " + std::to_string(input_site) + " outside 1.." + std::to_string(n));
    }
    if (!(t0 > 0) || !std::isfinite(t0)) {
        throw InvalidTarget("t0 must be a positive time");
    }
    double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1) > 1e-12) {
        throw InvalidTarget("target amplitudes are not unit norm (sum of squares " + std::to_string(norm2) + ")");
    }
    if (input_site == 1 && n > 1 && amplitudes[n - 1] == 0) {
        throw InvalidTarget("target has no amplitude on the far end site, which a chain fed at site 1 cannot avoid");
    }
}

TargetState TargetState::normalized(Vec amps, int input, double time) {
    double norm = amps.norm();
    if (!(norm > 0)) {
        throw InvalidTarget("target amplitudes are all zero");
    }
    return TargetState(amps / norm, input, time);
}

TargetState TargetState::w_state(int n, double time) {
    return TargetState(Vec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))), 1, time);
}

TargetState TargetState::end_site(int n, double time) {
    Vec a = Vec::Zero(n);
    a[n - 1] = 1;
    return TargetState(a, 1, time);
}

}  // namespace chainsmith
