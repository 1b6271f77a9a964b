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

#ifndef CHAINSMITH_MIRROR_HPP
#define CHAINSMITH_MIRROR_HPP

#include <numbers>

#include "chainsmith/chain.hpp"

namespace chainsmith {

/// Builds the (2N-1)-site chain whose middle site N plays the role of site 1
/// of `chain`. Primed states |n'> = cos(theta)|N+1-n> + sin(theta)|N-1+n>
/// (n >= 2) and |1'> = |N> span an invariant subspace on which the new
/// Hamiltonian equals the old one.
ChainSpec extend_from_middle(const ChainSpec &chain, double theta = std::numbers::pi / 4);

/// Target produced by the extended chain from its middle site.
TargetState predict_extended_target(const Vec &alpha, double theta = std::numbers::pi / 4, double t0 = kHalfPi);

/// Columns are |1'>, ..., |N'> in the (2N-1)-site basis.
Mat extension_embedding(int n, double theta);

}  // namespace chainsmith

#endif
