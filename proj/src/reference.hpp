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

#ifndef CHAINSMITH_SRC_REFERENCE_HPP
#define CHAINSMITH_SRC_REFERENCE_HPP

#include <optional>

#include "chainsmith/design.hpp"
#include "chainsmith/errors.hpp"
#include "chainsmith/pst.hpp"
#include "chainsmith/spectral.hpp"

namespace chainsmith::internal {

/// The PST chain a design starts from, with its v-basis precomputed.
struct Reference {
    explicit Reference(const PstSpectrum &spectrum)
        : spectrum(spectrum), chain(pst_chain_from_spectrum(spectrum)), es(eigensystem(chain)), vb(v_basis(es)) {}

    int size() const {
        return spectrum.size();
    }
    const Vec &eigenvalues() const {
        return es.eigenvalues;
    }

    PstSpectrum spectrum;
    ChainSpec chain;
    EigenSystem es;
    Mat vb;
};

/// Reconstructs from weights, returning nothing when the weights are not
/// admissible or the recurrence breaks down.
inline std::optional<LanczosResult> try_build(const Vec &eigenvalues, const Vec &weights, double floor = 1e-12) {
    if (!weights.allFinite() || weights.minCoeff() <= floor) {
        return std::nullopt;
    }
    try {
        return lanczos_with_basis(SpectralData(eigenvalues, weights / weights.sum()));
    } catch (const Error &) {
        return std::nullopt;
    }
}

}  // namespace chainsmith::internal

#endif
