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

#ifndef CHAINSMITH_PST_HPP
#define CHAINSMITH_PST_HPP

#include <vector>

#include "chainsmith/chain.hpp"

namespace chainsmith {

/// Eigenvalues lambda_n = (pi / t0) * (m_n + shift) with integer m_n, where
/// shift is 1/2 when half_shift is set. Consecutive m_n must differ by odd
/// amounts so that exp(-i lambda_n t0) alternates in sign.
/// The half shift is what lets even-length chains use a symmetric spectrum.
class PstSpectrum {
   public:
    PstSpectrum(std::vector<long> m, bool half_shift = false, double t0 = kHalfPi);

    /// Consecutive integers centred on zero, i.e. lambda_n = (N+1-2n) pi/(2 t0).
    static PstSpectrum linear(int n, double t0 = kHalfPi);

    int size() const {
        return static_cast<int>(m_.size());
    }
    const std::vector<long> &integers() const {
        return m_;
    }
    bool half_shift() const {
        return half_shift_;
    }
    double t0() const {
        return t0_;
    }
    double scale() const;
    Vec eigenvalues() const;

   private:
    std::vector<long> m_;
    bool half_shift_;
    double t0_;
};

/// B = 0, J_n = (pi / (2 t0)) sqrt(n (N - n)).
ChainSpec christandl_chain(int n, double t0 = kHalfPi);

ChainSpec pst_chain_from_spectrum(const PstSpectrum &spectrum);

/// True when some global phase phi puts every exp(i(phi + lambda_n t0)) on +-1.
bool validate_synthesis_spectrum(const Vec &eigenvalues, double t0, double angular_tol = 1e-9);

}  // namespace chainsmith

#endif
