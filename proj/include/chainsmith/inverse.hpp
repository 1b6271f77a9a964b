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

#ifndef CHAINSMITH_INVERSE_HPP
#define CHAINSMITH_INVERSE_HPP

#include "chainsmith/chain.hpp"

namespace chainsmith {

/// Spectrum (strictly decreasing) and squared first components of the
/// eigenvectors (positive, summing to one).
struct SpectralData {
    SpectralData(Vec eigenvalues, Vec weights);

    Vec eigenvalues;
    Vec weights;
};

/// Chain plus the eigenvector matrix produced along the way.
/// basis(k, j) is the component of eigenvector k on site j.
struct LanczosResult {
    ChainSpec chain;
    Mat basis;
};

/// Lanczos on diag(eigenvalues) started from sqrt(weights), with full
/// reorthogonalization. Couplings come out positive.
LanczosResult lanczos_with_basis(const SpectralData &data, const Tolerances &tol = {});

ChainSpec lanczos_reconstruct(const SpectralData &data, const Tolerances &tol = {});

/// Weights of the unique mirror-symmetric chain with this spectrum:
/// w_n proportional to 1/|p'(lambda_n)|, accumulated in the log domain.
SpectralData persymmetric_weights(const Vec &eigenvalues);

/// Reconstructs the chain whose |v_1> (entries w_n) is given.
ChainSpec chain_from_v1(const Vec &v1, const Vec &eigenvalues, const Tolerances &tol = {});

}  // namespace chainsmith

#endif
