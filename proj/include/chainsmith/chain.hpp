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

#ifndef CHAINSMITH_CHAIN_HPP
#define CHAINSMITH_CHAIN_HPP

#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace chainsmith {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kHalfPi = std::numbers::pi / 2;

/// Numerical thresholds shared across modules. Every default can be
/// overridden from the CLI config file.
struct Tolerances {
    double spectral_residual = 1e-10;  // relative to max |eigenvalue|
    double spectrum_match = 1e-8;
    double degeneracy_gap = 1e-12;     // relative to max |eigenvalue|
    double lanczos_breakdown = 1e-12;  // on J^2, relative to max eigenvalue^2
    double weight_floor = 1e-12;
};

/// Real symmetric tridiagonal Hamiltonian of an N-site chain.
/// fields = diagonal B[1..N], couplings = off-diagonal J[1..N-1].
class ChainSpec {
   public:
    ChainSpec(Vec fields, Vec couplings);

    static ChainSpec with_zero_fields(Vec couplings);

    int size() const {
        return static_cast<int>(fields_.size());
    }
    const Vec &fields() const {
        return fields_;
    }
    const Vec &couplings() const {
        return couplings_;
    }

    Mat dense() const;
    double max_abs_coupling() const;
    double coupling_product() const;
    bool is_mirror_symmetric(double tol) const;

    /// Conjugates by diag(signs); signs[0] is the sign applied to site 1.
    ChainSpec gauged(const std::vector<int> &signs) const;

    /// Same chain with every coupling made positive.
    ChainSpec positive_gauge() const;

   private:
    Vec fields_;
    Vec couplings_;
};

/// Real unit-norm target amplitudes with the site where the excitation starts.
struct TargetState {
    TargetState(Vec amplitudes, int input_site = 1, double t0 = kHalfPi);

    /// Rescales the amplitudes to unit norm before validating.
    static TargetState normalized(Vec amplitudes, int input_site = 1, double t0 = kHalfPi);
    static TargetState w_state(int n, double t0 = kHalfPi);
    static TargetState end_site(int n, double t0 = kHalfPi);

    int size() const {
        return static_cast<int>(amplitudes.size());
    }

    Vec amplitudes;
    int input_site;
    double t0;
};

}  // namespace chainsmith

#endif
