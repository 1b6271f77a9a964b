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

#ifndef CHAINSMITH_SPECTRAL_HPP
#define CHAINSMITH_SPECTRAL_HPP

#include <complex>

#include "chainsmith/chain.hpp"

namespace chainsmith {

using CVec = Eigen::VectorXcd;

/// Eigenvalues sorted strictly decreasing. Column n of `vectors` is the
/// eigenvector |lambda_n>, with its first nonzero entry positive.
struct EigenSystem {
    Vec eigenvalues;
    Mat vectors;
    /// lambda_{n,1}^2. Weights below 1e-6 are recomputed to full relative
    /// accuracy, which the inverse problem needs for localized eigenvectors.
    Vec first_row_weights;
};

/// In-place implicit-shift QL on a symmetric tridiagonal matrix.
/// d: diagonal (overwritten by eigenvalues, unsorted), e: off-diagonal of
/// length n-1. z: on entry any matrix to accumulate into (identity for
/// eigenvectors of the tridiagonal itself); on exit columns are eigenvectors.
/// Returns false if some eigenvalue needed more than 60 sweeps.
bool tridiagonal_ql(Vec &d, Vec e, Mat &z);

EigenSystem eigensystem(const ChainSpec &chain, const Tolerances &tol = {});

CVec evolve(const EigenSystem &es, const CVec &input, double t);
CVec evolve(const ChainSpec &chain, const CVec &input, double t);

/// Output state e^{-iHt}|site> for a site index in 1..N.
CVec evolve_site(const EigenSystem &es, int site, double t);

struct Overlap {
    double fidelity;
    double phase;
};

Overlap fidelity(const EigenSystem &es, const TargetState &target);
Overlap fidelity(const ChainSpec &chain, const TargetState &target);

/// Column m holds |v_m>, with <k|v_m> = lambda_{k,1} lambda_{k,m}.
Mat v_basis(const EigenSystem &es);
Mat v_basis(const ChainSpec &chain);

/// Entry (m, n), zero-based in storage, is beta^{(n)}_m: the coordinate of
/// |v_n> along the reference vector |v~_m>.
struct BetaTable {
    Mat coefficients;
    /// Largest relative residual of the per-column linear solves.
    double solve_residual = 0;

    int size() const {
        return static_cast<int>(coefficients.rows());
    }
    /// One-based accessor matching the usual table notation.
    double at(int m, int n) const {
        return coefficients(m - 1, n - 1);
    }
    Vec first_column() const {
        return coefficients.col(0);
    }
    Vec bottom_row() const {
        return coefficients.row(coefficients.rows() - 1).transpose();
    }
};

BetaTable beta_table(const ChainSpec &chain, const ChainSpec &reference, const Tolerances &tol = {});

/// Largest violation of the intertwining relation H V = V H~ in the table's
/// coordinates. Zero for any table built from two isospectral chains.
double beta_residual(const BetaTable &table, const ChainSpec &chain, const ChainSpec &reference);

}  // namespace chainsmith

#endif
