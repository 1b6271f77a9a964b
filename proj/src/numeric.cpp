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

#include "chainsmith/numeric.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chainsmith/errors.hpp"
#include "chainsmith/revival.hpp"
#include "reference.hpp"

namespace chainsmith {

namespace {

Vec geometric_weights(int n, double r) {
    Vec w(n);
    if (r == 1) {
        w.setConstant(1.0 / n);
        return w;
    }
    for (int k = 0; k < n; k++) {
        w[k] = std::pow(r, k);
    }
    return w / w.sum();
}

double site_one_amplitude(int n, double r) {
    return alternating_signs(n).dot(geometric_weights(n, r));
}

double infidelity_of(const Vec &amps, const Vec &alpha) {
    std::vector<int> d = gauge_signs(amps, alpha);
    double f = 0;
    for (Eigen::Index j = 0; j < amps.size(); j++) {
        f += alpha[j] * d[j] * amps[j];
    }
    return 1 - std::abs(f);
}

}  // namespace

double initial_guess_ratio(int n, double alpha1) {
    if (n < 2) {
        throw RootNotBracketed("geometric guess needs at least two sites");
    }
    if (!(std::abs(alpha1) < 1)) {
        throw RootNotBracketed("geometric guess needs |alpha1| < 1");
    }
    // site_one_amplitude falls from 1 at r = 0 to its r = 1 limit
    // (0 for even N, 1/N for odd N).
    double upper = site_one_amplitude(n, 1.0);
    if (std::abs(alpha1 - upper) <= 1e-15) {
        return 1.0;
    }
    if (alpha1 < upper) {
        throw RootNotBracketed(
            "alpha1 = " + std::to_string(alpha1) + " is below the geometric family's limit " + std::to_string(upper));
    }
    double lo = 0, hi = 1;
    for (int it = 0; it < 200; it++) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        if (site_one_amplitude(n, mid) > alpha1) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Vec initial_guess(int n, double alpha1) {
    return geometric_weights(n, initial_guess_ratio(n, alpha1));
}

DesignResult refine(const TargetState &target, const Vec &start, const SolverConfig &config, RefineTrace *trace) {
    const int n = target.size();
    if (target.input_site != 1) {
        throw InvalidTarget("the numeric designer feeds the excitation in at site 1");
    }
    if (std::abs(target.amplitudes[n - 1]) < 1e-6) {
        throw InvalidTarget("target has no amplitude on the far end site");
    }
    if (start.size() != n) {
        throw InvalidWeights("start weights have the wrong length");
    }
    if (start.minCoeff() <= 0) {
        throw InvalidWeights("start weights must be positive");
    }
    PstSpectrum spectrum = config.spectrum.value_or(PstSpectrum::linear(n, target.t0));
    if (spectrum.size() != n) {
        throw InvalidSpectrum("solver spectrum length does not match the target");
    }
    if (std::abs(spectrum.t0() - target.t0) > 1e-12 * target.t0) {
        throw InvalidSpectrum("solver spectrum was built for a different t0");
    }

    if (config.parity) {
        RevivalSpec spec(spectrum, target.amplitudes);
        StructuredOptions opts;
        opts.parity = true;
        opts.tolerance = std::max(1e-13, std::sqrt(config.residual_tol) * 1e-2);
        auto results = design_structured(spec, opts);
        return std::move(results.front());
    }

    internal::Reference ref(spectrum);
    const Vec &alpha = target.amplitudes;
    const Vec &lam = ref.eigenvalues();

    struct Iterate {
        Vec x;
        Vec w;
        std::optional<LanczosResult> built;
        Vec amps;
        Vec residual;
        double infidelity;
    };
    auto evaluate = [&](const Vec &x, Iterate &it) {
        it.x = x;
        Vec e = (x.array() - x.maxCoeff()).exp();
        it.w = e / e.sum();
        it.built = internal::try_build(lam, it.w, 0.0);
        if (!it.built) {
            return false;
        }
        it.amps = synthesis_amplitudes(it.built->basis, it.w);
        it.residual.resize(n);
        it.residual[0] = it.amps[0] - alpha[0];
        for (int j = 1; j < n; j++) {
            it.residual[j] = alpha[j] == 0 ? it.amps[j] : std::abs(it.amps[j]) - std::abs(alpha[j]);
        }
        it.infidelity = infidelity_of(it.amps, alpha);
        return true;
    };

    Iterate cur;
    if (!evaluate(start.array().log().matrix(), cur)) {
        throw InvalidWeights("start weights do not define a chain");
    }
    if (trace) {
        trace->infidelity.push_back(cur.infidelity);
    }
    int iters = 0;
    int polish = 0;
    Iterate best = cur;
    // Once the fidelity target is met, a few more steps drive the amplitude
    // residual itself down to round-off.
    const double residual_floor = 1e-14 * std::sqrt(static_cast<double>(n));
    while (true) {
        bool met = cur.infidelity <= config.residual_tol;
        if (met && (cur.residual.norm() <= residual_floor || polish >= 5)) {
            break;
        }
        if (!met && iters >= config.max_iterations) {
            throw ConvergenceFailure(
                "numeric designer stopped after " + std::to_string(iters) + " iterations", best.infidelity, best.w, iters);
        }
        iters++;
        Mat dirs(n, n);
        for (int i = 0; i < n; i++) {
            Vec d = -cur.w[i] * cur.w;
            d[i] += cur.w[i];
            dirs.col(i) = d;
        }
        Mat jac = amplitude_jacobian(cur.built->basis, cur.w, dirs);
        for (int j = 1; j < n; j++) {
            if (alpha[j] != 0 && cur.amps[j] < 0) {
                jac.row(j) *= -1;
            }
        }
        Vec step = config.damping * jac.completeOrthogonalDecomposition().solve(-cur.residual);
        double nr = cur.residual.norm();
        double scale = 1;
        bool accepted = false;
        for (int h = 0; h < 50; h++) {
            Iterate trial;
            if (evaluate(cur.x + scale * step, trial) && trial.residual.norm() < nr &&
                trial.infidelity <= cur.infidelity + 1e-15) {
                cur = std::move(trial);
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) {
            if (met) {
                break;
            }
            throw ConvergenceFailure("numeric designer stalled", best.infidelity, best.w, iters);
        }
        if (met) {
            polish++;
        }
        if (cur.infidelity < best.infidelity) {
            best = cur;
        }
        if (trace) {
            trace->infidelity.push_back(cur.infidelity);
        }
    }

    DesignDiagnostics diag;
    diag.method = "numeric";
    diag.iterations = iters;
    diag.residual = cur.residual.norm();
    return finish_design(*cur.built, cur.w, ref.chain, target, diag);
}

MomentFields moment_fields(const BetaTable &table, const ChainSpec &reference) {
    const int n = table.size();
    if (reference.size() != n) {
        throw DegenerateMoment("table and reference differ in size");
    }
    Mat h = reference.dense();
    // rows(p) = <1| H~^p
    Mat rows(n + 1, n);
    rows.row(0) = Vec::Unit(n, 0).transpose();
    for (int p = 1; p <= n; p++) {
        rows.row(p) = rows.row(p - 1) * h;
    }
    // mu(k, p) = <1|H~^p|beta^{(k)}>; prod_{i<k} J_i = mu(k, k-1), sum_{i<=k} B_i = mu(k, k) / mu(k, k-1).
    Vec lead(n);
    Vec partial(n);
    for (int k = 1; k <= n; k++) {
        Vec col = table.coefficients.col(k - 1);
        double denom = rows.row(k - 1).dot(col);
        if (std::abs(denom) < 1e-12) {
            throw DegenerateMoment("moment <1|H~^" + std::to_string(k - 1) + "|beta^(" + std::to_string(k) + ")> vanishes");
        }
        lead[k - 1] = denom;
        partial[k - 1] = rows.row(k).dot(col) / denom;
    }
    MomentFields out;
    out.fields.resize(n);
    out.couplings_squared.resize(n - 1);
    for (int k = 0; k < n; k++) {
        out.fields[k] = partial[k] - (k > 0 ? partial[k - 1] : 0.0);
    }
    for (int k = 0; k + 1 < n; k++) {
        double ratio = lead[k + 1] / lead[k];
        out.couplings_squared[k] = ratio * ratio;
    }
    return out;
}

}  // namespace chainsmith
