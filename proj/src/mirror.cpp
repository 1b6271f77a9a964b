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
#include <cstdlib>

#include "chainsmith/errors.hpp"

namespace chainsmith {

namespace {

void check_theta(double theta) {
    if (!(theta > 0 && theta < std::numbers::pi / 2)) {
        throw InvalidChain("splitting angle must lie strictly between 0 and pi/2");
    }
}

}  // namespace

ChainSpec extend_from_middle(const ChainSpec &chain, double theta) {
    check_theta(theta);
    const int n = chain.size();
    if (n < 2) {
        throw InvalidChain("extension needs a chain of at least two sites");
    }
    const int m = 2 * n - 1;
    Vec b(m);
    Vec j(m - 1);
    for (int k = 1; k <= m; k++) {
        b[k - 1] = chain.fields()[std::abs(k - n)];
    }
    // J'_k = J_{1/2 + |k - N + 1/2|}; doubled to stay in integers.
    for (int k = 1; k <= m - 1; k++) {
        int idx = (1 + std::abs(2 * k - 2 * n + 1)) / 2;
        j[k - 1] = chain.couplings()[idx - 1];
    }
    j[n - 2] = chain.couplings()[0] * std::cos(theta);
    j[n - 1] = chain.couplings()[0] * std::sin(theta);
    return ChainSpec(b, j);
}

Mat extension_embedding(int n, double theta) {
    check_theta(theta);
    Mat e = Mat::Zero(2 * n - 1, n);
    e(n - 1, 0) = 1;
    for (int k = 2; k <= n; k++) {
        e(n - k, k - 1) = std::cos(theta);
        e(n + k - 2, k - 1) = std::sin(theta);
    }
    return e;
}

TargetState predict_extended_target(const Vec &alpha, double theta, double t0) {
    const int n = static_cast<int>(alpha.size());
    Vec out = extension_embedding(n, theta) * alpha;
    return TargetState(out, n, t0);
}

}  // namespace chainsmith
