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

#include "chainsmith/pst.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chainsmith/errors.hpp"
#include "chainsmith/inverse.hpp"

namespace chainsmith {

PstSpectrum::PstSpectrum(std::vector<long> m, bool half_shift, double t0)
    : m_(std::move(m)), half_shift_(half_shift), t0_(t0) {
    if (m_.empty()) {
        throw InvalidSpectrum("spectrum has no eigenvalues");
    }
    if (!(t0_ > 0) || !std::isfinite(t0_)) {
        throw InvalidSpectrum("t0 must be a positive time");
    }
    for (size_t k = 0; k + 1 < m_.size(); k++) {
        long gap = m_[k] - m_[k + 1];
        if (gap <= 0) {
            throw InvalidSpectrum("integers must be strictly decreasing (index " + std::to_string(k + 1) + ")");
        }
        if (gap % 2 == 0) {
            throw InvalidSpectrum(
                "m_" + std::to_string(k + 1) + " and m_" + std::to_string(k + 2) +
                " differ by an even amount, so their phases do not alternate");
        }
    }
}

PstSpectrum PstSpectrum::linear(int n, double t0) {
    if (n < 1) {
        throw InvalidSpectrum("chain length must be positive");
    }
    std::vector<long> m(n);
    bool odd = n % 2 == 1;
    for (int k = 1; k <= n; k++) {
        m[k - 1] = odd ? (n + 1) / 2 - k : n / 2 - k;
    }
    return PstSpectrum(m, !odd, t0);
}

double PstSpectrum::scale() const {
    return std::numbers::pi / t0_;
}

Vec PstSpectrum::eigenvalues() const {
    Vec lam(size());
    double shift = half_shift_ ? 0.5 : 0.0;
    for (int k = 0; k < size(); k++) {
        lam[k] = scale() * (static_cast<double>(m_[k]) + shift);
    }
    return lam;
}

ChainSpec christandl_chain(int n, double t0) {
    if (n < 2) {
        throw InvalidChain("a transfer chain needs at least two sites");
    }
    Vec j(n - 1);
    double c = std::numbers::pi / (2 * t0);
    for (int k = 1; k < n; k++) {
        j[k - 1] = c * std::sqrt(static_cast<double>(k) * (n - k));
    }
    return ChainSpec::with_zero_fields(j);
}

ChainSpec pst_chain_from_spectrum(const PstSpectrum &spectrum) {
    return lanczos_reconstruct(persymmetric_weights(spectrum.eigenvalues()));
}

bool validate_synthesis_spectrum(const Vec &eigenvalues, double t0, double angular_tol) {
    if (eigenvalues.size() == 0 || !eigenvalues.allFinite() || !(t0 > 0)) {
        return false;
    }
    // All phases lambda_n t0 must agree modulo pi.
    const double pi = std::numbers::pi;
    for (Eigen::Index k = 1; k < eigenvalues.size(); k++) {
        double theta = (eigenvalues[k] - eigenvalues[0]) * t0;
        double off = theta - pi * std::round(theta / pi);
        if (std::abs(off) > angular_tol) {
            return false;
        }
    }
    return true;
}

}  // namespace chainsmith
