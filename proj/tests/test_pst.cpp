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

#include "chainsmith/pst.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "chainsmith/errors.hpp"
#include "chainsmith/spectral.hpp"
#include "oracles.hpp"

using namespace chainsmith;

TEST(pst, christandl_five) {
    ChainSpec chain = christandl_chain(5);
    ASSERT_LT(chain.fields().cwiseAbs().maxCoeff(), 1e-15);
    ASSERT_NEAR(chain.couplings()[0], 2, 1e-14);
    ASSERT_NEAR(chain.couplings()[1], std::sqrt(6.0), 1e-14);
    ASSERT_NEAR(chain.couplings()[2], std::sqrt(6.0), 1e-14);
    ASSERT_NEAR(chain.couplings()[3], 2, 1e-14);
    ASSERT_NEAR(christandl_chain(2).couplings()[0], 1, 1e-15);
}

TEST(pst, christandl_transfers_against_propagator) {
    for (int n : {2, 3, 8, 21}) {
        ChainSpec chain = christandl_chain(n);
        Vec target = Vec::Unit(n, n - 1);
        double f = oracle::transfer_overlap(chain.fields(), chain.couplings(), 1, target, kHalfPi);
        ASSERT_NEAR(f, 1, 1e-10) << n;
    }
}

TEST(pst, christandl_other_t0) {
    ChainSpec chain = christandl_chain(9, 1.0);
    ASSERT_NEAR(fidelity(chain, TargetState::end_site(9, 1.0)).fidelity, 1, 1e-10);
}

TEST(pst, spectrum_from_integers) {
    PstSpectrum s({2, 1, 0, -1, -2});
    Vec lam = s.eigenvalues();
    for (int k = 0; k < 5; k++) {
        ASSERT_NEAR(lam[k], 4 - 2 * k, 1e-14);
    }
    ASSERT_NEAR(s.scale(), 2, 1e-15);
    PstSpectrum even = PstSpectrum::linear(4);
    ASSERT_TRUE(even.half_shift());
    ASSERT_NEAR(even.eigenvalues()[0], 3, 1e-14);
    ASSERT_NEAR(even.eigenvalues()[3], -3, 1e-14);
}

TEST(pst, spectrum_rejects_bad_parity_and_order) {
    ASSERT_THROW(PstSpectrum({3, 1, 0, -1, -3}), InvalidSpectrum);
    ASSERT_THROW(PstSpectrum({1, -1}), InvalidSpectrum);
    ASSERT_THROW(PstSpectrum({0, 1}), InvalidSpectrum);
    ASSERT_THROW(PstSpectrum({}), InvalidSpectrum);
    ASSERT_THROW(PstSpectrum({1, 0}, false, -1.0), InvalidSpectrum);
}

TEST(pst, chain_from_spectrum_matches_christandl) {
    ChainSpec a = pst_chain_from_spectrum(PstSpectrum({2, 1, 0, -1, -2}));
    ChainSpec b = christandl_chain(5);
    ASSERT_LT((a.couplings() - b.couplings()).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LT(a.fields().cwiseAbs().maxCoeff(), 1e-10);
    ChainSpec two = pst_chain_from_spectrum(PstSpectrum({0, -1}, true));
    ASSERT_NEAR(two.couplings()[0], 1, 1e-12);
}

TEST(pst, nonlinear_spectra_transfer_perfectly) {
    std::vector<std::vector<long>> spectra = {
        {4, 1, 0, -1, -4},
        {5, 2, 1, 0, -1, -2, -5},
        {7, 4, 3, 0, -3, -4, -7},
    };
    for (const auto &m : spectra) {
        PstSpectrum s(m);
        ChainSpec chain = pst_chain_from_spectrum(s);
        int n = chain.size();
        ASSERT_TRUE(chain.is_mirror_symmetric(1e-8));
        double f = oracle::transfer_overlap(chain.fields(), chain.couplings(), 1, Vec::Unit(n, n - 1), kHalfPi);
        ASSERT_NEAR(f, 1, 1e-8);
        Vec lam = oracle::eigenvalues_desc(chain.dense());
        ASSERT_LT((lam - s.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(pst, end_components_alternate) {
    EigenSystem es = eigensystem(christandl_chain(9));
    for (int k = 0; k < 9; k++) {
        double sign = k % 2 == 0 ? 1 : -1;
        ASSERT_NEAR(es.vectors(0, k), sign * es.vectors(8, k), 1e-13);
    }
}

TEST(pst, product_identity_at_zero_eigenvalue) {
    // prod J~ = w |p'(0)| with w the weight at the zero eigenvalue.
    for (int n : {5, 9, 15, 21}) {
        ChainSpec chain = christandl_chain(n);
        EigenSystem es = eigensystem(chain);
        int z = n / 2;
        double dp = 1;
        for (int k = 0; k < n; k++) {
            if (k != z) {
                dp *= std::abs(es.eigenvalues[k]);
            }
        }
        double expected = es.first_row_weights[z] * dp;
        ASSERT_NEAR(chain.coupling_product() / expected, 1, 1e-8) << n;
    }
}

TEST(pst, validate_synthesis_spectrum_examples) {
    Vec a(5);
    a << 4, 2, 0, -2, -4;
    ASSERT_TRUE(validate_synthesis_spectrum(a, kHalfPi));
    Vec b(2);
    b << 1, 0;
    ASSERT_FALSE(validate_synthesis_spectrum(b, kHalfPi));
    Vec c(3);
    c << std::sqrt(2.0), 0, -std::sqrt(2.0);
    ASSERT_FALSE(validate_synthesis_spectrum(c, kHalfPi));
    // A global offset is allowed.
    ASSERT_TRUE(validate_synthesis_spectrum((a.array() + 0.37).matrix(), kHalfPi));
    // Phases all equal, not alternating, still pass the +-1 test.
    Vec d(2);
    d << 4, 0;
    ASSERT_TRUE(validate_synthesis_spectrum(d, kHalfPi));
}
