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

#include "chainsmith/mirror.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "chainsmith/errors.hpp"
#include "chainsmith/pst.hpp"
#include "chainsmith/revival.hpp"
#include "chainsmith/spectral.hpp"
#include "oracles.hpp"

using namespace chainsmith;

TEST(mirror, restriction_equals_original) {
    oracle::ChainGen gen(51);
    for (int trial = 0; trial < 20; trial++) {
        int n = gen.integer(2, 15);
        auto [b, j] = gen.chain(n, 0.2, 2.0, 1.0);
        ChainSpec chain(b, j);
        double theta = gen.uniform(0.1, 1.4);
        ChainSpec ext = extend_from_middle(chain, theta);
        ASSERT_EQ(ext.size(), 2 * n - 1);
        Mat e = extension_embedding(n, theta);
        ASSERT_LT((e.transpose() * e - Mat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-14);
        Mat restricted = e.transpose() * ext.dense() * e;
        ASSERT_LT((restricted - chain.dense()).cwiseAbs().maxCoeff(), 1e-12);
        // Invariance: H' E = E H.
        ASSERT_LT((ext.dense() * e - e * chain.dense()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(mirror, spectrum_contains_original) {
    ChainSpec chain = christandl_chain(6);
    ChainSpec ext = extend_from_middle(chain);
    Vec lam = oracle::eigenvalues_desc(chain.dense());
    Vec big = oracle::eigenvalues_desc(ext.dense());
    for (double l : lam) {
        ASSERT_LT((big.array() - l).abs().minCoeff(), 1e-8);
    }
}

TEST(mirror, pst_splits_end_amplitude) {
    ChainSpec ext = extend_from_middle(christandl_chain(6));
    TargetState t = predict_extended_target(Vec::Unit(6, 5));
    ASSERT_EQ(t.input_site, 6);
    ASSERT_NEAR(t.amplitudes[0], std::sqrt(0.5), 1e-15);
    ASSERT_NEAR(t.amplitudes[10], std::sqrt(0.5), 1e-15);
    double f = oracle::transfer_overlap(ext.fields(), ext.couplings(), 6, t.amplitudes, kHalfPi);
    ASSERT_NEAR(f, 1, 1e-10);
}

TEST(mirror, predicted_target_site_map) {
    oracle::ChainGen gen(52);
    int n = 7;
    Vec a(n);
    for (int k = 0; k < n; k++) {
        a[k] = gen.uniform(-1, 1);
    }
    a /= a.norm();
    double theta = std::numbers::pi / 3;
    TargetState t = predict_extended_target(a, theta);
    ASSERT_NEAR(t.amplitudes.norm(), 1, 1e-14);
    ASSERT_NEAR(t.amplitudes[n - 1], a[0], 1e-15);
    for (int k = 2; k <= n; k++) {
        ASSERT_NEAR(t.amplitudes[n + 1 - k - 1], std::cos(theta) * a[k - 1], 1e-15);
        ASSERT_NEAR(t.amplitudes[n - 1 + k - 1], std::sin(theta) * a[k - 1], 1e-15);
    }
}

TEST(mirror, extension_preserves_design_fidelity) {
    PstSpectrum s = PstSpectrum::linear(11);
    auto designs = design_small_r(1 / std::sqrt(5.0), std::sqrt(0.4), std::sqrt(0.4), 3, s);
    ASSERT_FALSE(designs.empty());
    for (const auto &d : designs) {
        ChainSpec ext = extend_from_middle(d.chain);
        TargetState t = predict_extended_target(d.target.amplitudes);
        double f = oracle::transfer_overlap(ext.fields(), ext.couplings(), 11, t.amplitudes, kHalfPi);
        ASSERT_GE(f, d.fidelity - 1e-9);
        // |1>+|9>+|11>+|13>+|21> over sqrt(5).
        for (int site : {1, 9, 11, 13, 21}) {
            ASSERT_NEAR(std::abs(t.amplitudes[site - 1]), 1 / std::sqrt(5.0), 1e-12);
        }
        // Equal splitting at pi/4.
        CVec out = evolve_site(eigensystem(ext), 11, kHalfPi);
        for (int k = 2; k <= 11; k++) {
            ASSERT_NEAR(std::abs(out[11 - k]), std::abs(out[9 + k]), 1e-10);
        }
    }
}

TEST(mirror, rejects_bad_angle) {
    ASSERT_THROW(extend_from_middle(christandl_chain(4), 0.0), InvalidChain);
    ASSERT_THROW(extend_from_middle(christandl_chain(4), std::numbers::pi / 2), InvalidChain);
    ASSERT_THROW(extend_from_middle(ChainSpec(Vec::Zero(1), Vec(0))), InvalidChain);
}
