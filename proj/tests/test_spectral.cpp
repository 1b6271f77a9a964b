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

#include "chainsmith/spectral.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "chainsmith/errors.hpp"
#include "chainsmith/pst.hpp"
#include "oracles.hpp"

using namespace chainsmith;

TEST(spectral, ql_matches_dense_solver_on_random_chains) {
    oracle::ChainGen gen(11);
    for (int trial = 0; trial < 50; trial++) {
        int n = gen.integer(1, 40);
        auto [b, j] = gen.chain(n, 0.1, 2.0, 1.0);
        EigenSystem es = eigensystem(ChainSpec(b, j));
        Vec expected = oracle::eigenvalues_desc(oracle::tridiagonal(b, j));
        ASSERT_LT((es.eigenvalues - expected).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
    }
}

TEST(spectral, eigensystem_conventions) {
    oracle::ChainGen gen(12);
    auto [b, j] = gen.chain(12, 0.2, 1.5, 0.5);
    ChainSpec chain(b, j);
    EigenSystem es = eigensystem(chain);
    Mat h = chain.dense();
    for (int k = 0; k < 12; k++) {
        if (k > 0) {
            ASSERT_LT(es.eigenvalues[k], es.eigenvalues[k - 1]);
        }
        ASSERT_GT(es.vectors(0, k), 0);
        ASSERT_NEAR(es.first_row_weights[k], es.vectors(0, k) * es.vectors(0, k), 1e-15);
        ASSERT_LT((h * es.vectors.col(k) - es.eigenvalues[k] * es.vectors.col(k)).norm(), 1e-12);
    }
    ASSERT_LT((es.vectors.transpose() * es.vectors - Mat::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-13);
    ASSERT_NEAR(es.first_row_weights.sum(), 1, 1e-14);
}

TEST(spectral, single_site) {
    ChainSpec chain(Vec::Constant(1, 0.3), Vec(0));
    EigenSystem es = eigensystem(chain);
    ASSERT_EQ(es.eigenvalues.size(), 1);
    ASSERT_DOUBLE_EQ(es.eigenvalues[0], 0.3);
    ASSERT_DOUBLE_EQ(es.vectors(0, 0), 1);
}

TEST(spectral, evolution_matches_taylor_propagator) {
    oracle::ChainGen gen(13);
    for (int trial = 0; trial < 10; trial++) {
        int n = gen.integer(2, 15);
        auto [b, j] = gen.chain(n, 0.1, 2.0, 1.0);
        double t = gen.uniform(0, 3);
        int site = gen.integer(1, n);
        CVec psi = evolve_site(eigensystem(ChainSpec(b, j)), site, t);
        oracle::CMat u = oracle::propagator(oracle::tridiagonal(b, j), t);
        ASSERT_LT((psi - u.col(site - 1)).cwiseAbs().maxCoeff(), 1e-11);
        ASSERT_NEAR(psi.squaredNorm(), 1, 1e-12);
    }
}

TEST(spectral, evolution_at_zero_is_identity) {
    ChainSpec chain = christandl_chain(7);
    CVec psi = evolve_site(eigensystem(chain), 3, 0.0);
    for (int k = 0; k < 7; k++) {
        ASSERT_NEAR(std::abs(psi[k]), k == 2 ? 1.0 : 0.0, 1e-15);
    }
}

TEST(spectral, fidelity_of_pst_and_phase) {
    ChainSpec chain = christandl_chain(6);
    Overlap ov = fidelity(chain, TargetState::end_site(6));
    ASSERT_NEAR(ov.fidelity, 1, 1e-12);
    // Output equals e^{i phase} |N>; check against the propagator.
    oracle::CMat u = oracle::propagator(chain.dense(), kHalfPi);
    ASSERT_NEAR(std::arg(u(5, 0)), ov.phase, 1e-10);
}

TEST(spectral, degenerate_chain_rejected) {
    // Two uncoupled-looking blocks cannot occur (J != 0 is enforced), but a
    // nearly split chain has a numerically degenerate spectrum.
    Vec b = Vec::Zero(4);
    Vec j(3);
    j << 1, 1e-300, 1;
    ASSERT_THROW(eigensystem(ChainSpec(b, j)), InvalidChain);
}

TEST(spectral, zero_coupling_rejected) {
    Vec j(2);
    j << 1, 0;
    ASSERT_THROW(ChainSpec(Vec::Zero(3), j), InvalidChain);
    ASSERT_THROW(ChainSpec(Vec::Zero(3), Vec::Ones(3)), InvalidChain);
}

TEST(spectral, v_basis_column_sums_and_v1_weights) {
    oracle::ChainGen gen(14);
    auto [b, j] = gen.chain(9, 0.3, 1.5, 1.0);
    ChainSpec chain(b, j);
    EigenSystem es = eigensystem(chain);
    Mat v = v_basis(es);
    Vec sums = v.colwise().sum().transpose();
    ASSERT_NEAR(sums[0], 1, 1e-13);
    ASSERT_LT(sums.tail(8).cwiseAbs().maxCoeff(), 1e-13);
    ASSERT_LT((v.col(0) - es.first_row_weights).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(spectral, v_basis_small_examples) {
    Mat v2 = v_basis(ChainSpec(Vec::Zero(2), Vec::Ones(1)));
    ASSERT_NEAR(v2(0, 1), 0.5, 1e-15);
    ASSERT_NEAR(v2(1, 1), -0.5, 1e-15);
    Mat v5 = v_basis(christandl_chain(5));
    const double binom[] = {1, 4, 6, 4, 1};
    for (int k = 0; k < 5; k++) {
        ASSERT_NEAR(v5(k, 0), binom[k] / 16, 1e-14);
    }
}

TEST(spectral, christandl_five_spectrum) {
    Vec j(4);
    j << 2, std::sqrt(6.0), std::sqrt(6.0), 2;
    EigenSystem es = eigensystem(ChainSpec(Vec::Zero(5), j));
    for (int k = 0; k < 5; k++) {
        ASSERT_NEAR(es.eigenvalues[k], 4 - 2 * k, 1e-13);
    }
    EigenSystem two = eigensystem(ChainSpec(Vec::Zero(2), Vec::Ones(1)));
    ASSERT_NEAR(two.eigenvalues[0], 1, 1e-15);
    ASSERT_NEAR(two.first_row_weights[1], 0.5, 1e-15);
}

TEST(spectral, mirror_symmetric_eigenvector_parity) {
    oracle::ChainGen gen(16);
    for (int n : {2, 5, 8, 13}) {
        auto [b, j] = gen.chain(n, 0.3, 1.5, 1.0, true);
        for (int k = 0; k < n / 2; k++) {
            b[n - 1 - k] = b[k];
        }
        for (int k = 0; k < (n - 1) / 2; k++) {
            j[n - 2 - k] = j[k];
        }
        EigenSystem es = eigensystem(ChainSpec(b, j));
        for (int e = 0; e < n; e++) {
            double sign = e % 2 == 0 ? 1 : -1;
            for (int m = 0; m < n; m++) {
                ASSERT_NEAR(es.vectors(m, e), sign * es.vectors(n - 1 - m, e), 1e-12);
            }
        }
    }
}

TEST(spectral, gauge_leaves_probabilities_unchanged) {
    oracle::ChainGen gen(17);
    auto [b, j] = gen.chain(10, 0.3, 1.5, 1.0);
    ChainSpec chain(b, j);
    std::vector<int> signs = {1, -1, -1, 1, -1, 1, 1, 1, -1, -1};
    CVec a = evolve_site(eigensystem(chain), 1, 1.3);
    CVec g = evolve_site(eigensystem(chain.gauged(signs)), 1, 1.3);
    ASSERT_LT((a.cwiseAbs() - g.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(spectral, beta_residual_detects_perturbation) {
    ChainSpec chain = christandl_chain(6);
    BetaTable t = beta_table(chain, chain);
    t.coefficients(3, 2) += 1e-3;
    ASSERT_GT(beta_residual(t, chain, chain), 1e-4);
}

TEST(spectral, beta_table_of_identical_chains_is_identity) {
    ChainSpec chain = christandl_chain(8);
    BetaTable t = beta_table(chain, chain);
    ASSERT_LT((t.coefficients - Mat::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_LT(beta_residual(t, chain, chain), 1e-12);
}

TEST(spectral, beta_table_structure_for_isospectral_pair) {
    // Any chain built from the reference spectrum with other weights.
    ChainSpec reference = christandl_chain(7);
    EigenSystem es = eigensystem(reference);
    Vec lam = es.eigenvalues;
    oracle::ChainGen gen(15);
    Vec w(7);
    for (int k = 0; k < 7; k++) {
        w[k] = gen.uniform(0.1, 1);
    }
    w /= w.sum();
    // Build the isospectral chain independently with Householder tridiagonalization.
    Vec q = w.cwiseSqrt();
    Mat d = lam.asDiagonal();
    Mat basis = Mat::Zero(7, 7);
    basis.col(0) = q;
    Vec bb(7), jj(6);
    for (int k = 0; k < 7; k++) {
        Vec u = d * basis.col(k);
        bb[k] = basis.col(k).dot(u);
        for (int pass = 0; pass < 2; pass++) {
            u -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * u);
        }
        if (k < 6) {
            jj[k] = u.norm();
            basis.col(k + 1) = u / jj[k];
        }
    }
    ChainSpec chain(bb, jj);
    BetaTable t = beta_table(chain, reference);
    // Row 1 is (1, 0, ..., 0) and the table is lower triangular.
    ASSERT_NEAR(t.at(1, 1), 1, 1e-10);
    for (int m = 1; m <= 7; m++) {
        for (int n = m + 1; n <= 7; n++) {
            ASSERT_NEAR(t.at(m, n), 0, 1e-10) << m << "," << n;
        }
    }
    for (int n = 2; n <= 7; n++) {
        ASSERT_NEAR(t.at(1, n), 0, 1e-10);
    }
    ASSERT_LT(beta_residual(t, chain, reference), 1e-9);
}

TEST(spectral, beta_table_rejects_different_spectra) {
    ASSERT_THROW(beta_table(christandl_chain(5), christandl_chain(5, 1.0)), SpectrumMismatch);
    ASSERT_THROW(beta_table(christandl_chain(5), christandl_chain(6)), SpectrumMismatch);
}
