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

#ifndef CHAINSMITH_ANALYSIS_HPP
#define CHAINSMITH_ANALYSIS_HPP

#include <cstdint>
#include <vector>

#include "chainsmith/chain.hpp"
#include "chainsmith/pst.hpp"

namespace chainsmith {

struct SpeedReport {
    double j_max;
    double j_max_t0;
    double coupling_product;
    double reference_product;
    /// |prod|J| - alphaN prod|J~|| / prod|J|, with the reference's own end
    /// amplitude divided out.
    double product_identity_error;
    double lower_bound_exact;
    double lower_bound_asymptotic;
};

SpeedReport speed_report(const ChainSpec &chain, const TargetState &target, const ChainSpec &reference);

/// Lower bound on J_max t0 from prod J = (alphaN / alphaN_ref) w_k |p'(lambda_k)|,
/// with k the eigenvalue closest to zero and w the reference weight there:
/// pi (w alphaN / alphaN_ref prod_{n != k} |m_n - m_k|)^{1/(N-1)}.
double lower_bound(const PstSpectrum &spectrum, double w, double alpha_n, double alpha_n_ref = 1.0);

/// Large-N form pi (N-1) / (2e).
double lower_bound_asymptotic(int n);

/// Time for a cascade of partial swaps at strength J_max producing the
/// W-state: step k leaves 1/sqrt(N) on site k, costing arccos(1/sqrt(N+1-k)).
double gate_model_time(int n, const TargetState &target);

enum class FieldPerturbation {
    /// B -> B(1 + d) for nonzero B, B -> d J_max for zero B.
    MultiplicativeWithFallback,
    /// B -> B(1 + d) only; zero fields stay zero.
    Multiplicative,
    /// B -> B + d J_max.
    Additive,
};

struct RobustnessOptions {
    FieldPerturbation fields = FieldPerturbation::MultiplicativeWithFallback;
    /// When set, field n reuses the draw of coupling n (coupling N-1 for the last site).
    bool shared_draw = false;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct RobustnessReport {
    double perturbation_fraction;
    int trials;
    double mean_fidelity;
    double best_fidelity;
    double std_fidelity;
    std::uint64_t rng_seed;
};

/// Per trial, every coupling and field gets an independent Uniform(-eps, eps)
/// fractional shift and the fidelity is taken at the target's t0. Trial t at
/// grid index e draws from a generator keyed by (seed, e, t), so results do
/// not depend on thread count.
std::vector<RobustnessReport> robustness_sweep(
    const ChainSpec &chain,
    const TargetState &target,
    const std::vector<double> &eps_grid,
    int trials,
    std::uint64_t seed,
    const RobustnessOptions &options = {});

/// Fidelities of individual trials, in trial order, clipped to at most 1.
std::vector<double> robustness_trials(
    const ChainSpec &chain,
    const TargetState &target,
    double eps,
    int eps_index,
    int trials,
    std::uint64_t seed,
    const RobustnessOptions &options = {});

}  // namespace chainsmith

#endif
