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

#ifndef CHAINSMITH_REVIVAL_HPP
#define CHAINSMITH_REVIVAL_HPP

#include <utility>
#include <vector>

#include "chainsmith/design.hpp"

namespace chainsmith {

enum class RevivalFamily { EndPair, Triple, LastK, SmallR, Combined, General };

/// A revival target: sparse real amplitudes on a reference PST spectrum.
/// The excitation always starts at site 1.
class RevivalSpec {
   public:
    RevivalSpec(PstSpectrum reference, std::vector<std::pair<int, double>> support);
    RevivalSpec(PstSpectrum reference, const Vec &amplitudes);

    int size() const {
        return reference_.size();
    }
    const PstSpectrum &reference() const {
        return reference_;
    }
    const Vec &amplitudes() const {
        return amplitudes_;
    }
    TargetState target() const;

    /// First site after site 1 that carries amplitude (N for an end pair).
    int first_support_after_one() const;
    RevivalFamily family() const;
    /// Whether the amplitude vanishes on every site N+1-2m.
    bool has_parity_pattern() const;

   private:
    PstSpectrum reference_;
    Vec amplitudes_;
};

/// Parameter reduction for targets vanishing on sites N-1, N-3, ...
/// beta^{(n)}_m is forced to zero whenever n+m is odd.
struct ParityMask {
    /// table(m-1, n-1) is true where beta^{(n)}_m may be nonzero.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> table;
    /// One-based indices m of the unknown entries of the first column.
    std::vector<int> free_parameters;
};

ParityMask parity_reduce(const RevivalSpec &spec);

/// |1> -> alpha1 |1> + sqrt(1 - alpha1^2) |N>.
DesignResult design_end_pair(double alpha1, const PstSpectrum &spectrum);

struct TripleRoot {
    double beta2;
    bool feasible;
    double min_weight;
};

/// Every real root beta^{(1)}_2 of the normalization equation for the target
/// alpha1|1> + alphaN1|N-1> + alphaN|N>, sorted by |beta2|.
std::vector<TripleRoot> triple_normalization_roots(
    double alpha1, double alpha_n1, double alpha_n, const PstSpectrum &spectrum);

std::vector<DesignResult> design_triple(double alpha1, double alpha_n1, double alpha_n, const PstSpectrum &spectrum);

struct StructuredOptions {
    /// Drop beta^{(1)}_m with m even (requires a parity target).
    bool parity = false;
    int continuation_steps = 10;
    int max_iterations = 80;
    double tolerance = 1e-12;
};

/// Solves for the free first-column entries beta^{(1)}_2..beta^{(1)}_{N+1-r}
/// (r = first support site after 1), with beta^{(1)}_{N+1-m} = alpha1 beta^{(1)}_m
/// for m < r. Each sign pattern of the interior amplitudes is followed by
/// continuation from the end-pair design. Returns distinct solutions sorted
/// by maximum coupling.
std::vector<DesignResult> design_structured(const RevivalSpec &spec, const StructuredOptions &options = {});

/// Targets supported on {1} and the last k sites (k < N/2). Also accepts the
/// combined family {1, 2, N-1, N}. k <= 2 defers to design_triple.
std::vector<DesignResult> design_last_k(const Vec &amplitudes, const PstSpectrum &spectrum);

/// Targets alpha1|1> + alphar|r> + alphaN|N> with r in {2, 3}.
std::vector<DesignResult> design_small_r(
    double alpha1, double alpha_r, double alpha_n, int r, const PstSpectrum &spectrum);

}  // namespace chainsmith

#endif
