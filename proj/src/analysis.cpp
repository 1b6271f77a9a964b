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

#include "chainsmith/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "chainsmith/errors.hpp"
#include "chainsmith/spectral.hpp"

namespace chainsmith {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_key(std::uint64_t seed, std::uint64_t eps_index, std::uint64_t trial) {
    return splitmix64(splitmix64(splitmix64(seed) ^ eps_index) ^ trial);
}

// Uniform in [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
double symmetric_unit(std::mt19937_64 &gen) {
    return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

// Infers the integer spectrum of a PST reference at time t0.
PstSpectrum spectrum_of(const Vec &lam, double t0) {
    std::vector<long> m(lam.size());
    double x0 = lam[0] * t0 / std::numbers::pi;
    bool half = std::abs(std::abs(x0 - std::floor(x0)) - 0.5) < 1e-6;
    for (Eigen::Index k = 0; k < lam.size(); k++) {
        double x = lam[k] * t0 / std::numbers::pi - (half ? 0.5 : 0.0);
        m[k] = std::lround(x);
        if (std::abs(x - static_cast<double>(m[k])) > 1e-6) {
            throw InvalidSpectrum("reference spectrum is not an integer multiple of pi/t0");
        }
    }
    return PstSpectrum(m, half, t0);
}

Eigen::Index zero_index(const PstSpectrum &spectrum) {
    Vec lam = spectrum.eigenvalues();
    Eigen::Index k;
    lam.cwiseAbs().minCoeff(&k);
    return k;
}

}  // namespace

double lower_bound(const PstSpectrum &spectrum, double w, double alpha_n, double alpha_n_ref) {
    const int n = spectrum.size();
    if (n < 2) {
        return 0;
    }
    Eigen::Index k = zero_index(spectrum);
    const auto &m = spectrum.integers();
    double log_prod = 0;
    for (int j = 0; j < n; j++) {
        if (j != k) {
            log_prod += std::log(std::abs(static_cast<double>(m[j] - m[k])));
        }
    }
    double log_total = std::log(w) + std::log(std::abs(alpha_n)) - std::log(std::abs(alpha_n_ref)) + log_prod;
    return std::numbers::pi * std::exp(log_total / (n - 1));
}

double lower_bound_asymptotic(int n) {
    return std::numbers::pi * (n - 1) / (2 * std::numbers::e);
}

SpeedReport speed_report(const ChainSpec &chain, const TargetState &target, const ChainSpec &reference) {
    const int n = chain.size();
    SpeedReport r{};
    r.j_max = chain.max_abs_coupling();
    r.j_max_t0 = r.j_max * target.t0;
    r.coupling_product = chain.coupling_product();
    r.reference_product = reference.coupling_product();
    r.lower_bound_asymptotic = lower_bound_asymptotic(n);

    EigenSystem ref = eigensystem(reference);
    double alpha_n_ref = std::abs(evolve_site(ref, 1, target.t0)[n - 1]);
    double alpha_n = std::abs(target.amplitudes[n - 1]);
    double predicted = alpha_n / alpha_n_ref * r.reference_product;
    r.product_identity_error = std::abs(r.coupling_product - predicted) / r.coupling_product;
    try {
        PstSpectrum spectrum = spectrum_of(ref.eigenvalues, target.t0);
        double w = ref.first_row_weights[zero_index(spectrum)];
        r.lower_bound_exact = lower_bound(spectrum, w, alpha_n, alpha_n_ref);
    } catch (const InvalidSpectrum &) {
        r.lower_bound_exact = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

double gate_model_time(int n, const TargetState &target) {
    if (target.size() != n || n < 2) {
        throw UnsupportedTarget("gate model needs a target of the given length");
    }
    double u = 1 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; j++) {
        if (std::abs(std::abs(target.amplitudes[j]) - u) > 1e-9) {
            throw UnsupportedTarget("gate model only covers the uniform W-state");
        }
    }
    double total = 0;
    for (int k = 1; k <= n - 1; k++) {
        total += std::acos(1 / std::sqrt(static_cast<double>(n + 1 - k)));
    }
    return total;
}

std::vector<double> robustness_trials(
    const ChainSpec &chain,
    const TargetState &target,
    double eps,
    int eps_index,
    int trials,
    std::uint64_t seed,
    const RobustnessOptions &options) {
    if (trials < 1) {
        throw InvalidTarget("robustness sweep needs at least one trial");
    }
    const int n = chain.size();
    const double jmax = chain.max_abs_coupling();
    std::vector<double> out(trials);

    auto run = [&](int t) {
        std::mt19937_64 gen(trial_key(seed, static_cast<std::uint64_t>(eps_index), static_cast<std::uint64_t>(t)));
        Vec j = chain.couplings();
        Vec b = chain.fields();
        Vec dj(n - 1);
        for (int k = 0; k < n - 1; k++) {
            dj[k] = eps * symmetric_unit(gen);
            j[k] *= 1 + dj[k];
        }
        for (int k = 0; k < n; k++) {
            double d = options.shared_draw && n > 1 ? dj[std::min(k, n - 2)] : eps * symmetric_unit(gen);
            switch (options.fields) {
                case FieldPerturbation::MultiplicativeWithFallback:
                    b[k] = b[k] != 0 ? b[k] * (1 + d) : d * jmax;
                    break;
                case FieldPerturbation::Multiplicative:
                    b[k] *= 1 + d;
                    break;
                case FieldPerturbation::Additive:
                    b[k] += d * jmax;
                    break;
            }
        }
        out[t] = std::min(1.0, fidelity(ChainSpec(b, j), target).fidelity);
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));
    if (threads <= 1) {
        for (int t = 0; t < trials; t++) {
            run(t);
        }
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; w++) {
        pool.emplace_back([&, w] {
            for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(threads)) {
                run(t);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    return out;
}

std::vector<RobustnessReport> robustness_sweep(
    const ChainSpec &chain,
    const TargetState &target,
    const std::vector<double> &eps_grid,
    int trials,
    std::uint64_t seed,
    const RobustnessOptions &options) {
    std::vector<RobustnessReport> reports;
    for (size_t e = 0; e < eps_grid.size(); e++) {
        std::vector<double> f = robustness_trials(chain, target, eps_grid[e], static_cast<int>(e), trials, seed, options);
        // Accumulating offsets from the first trial keeps the mean exactly
        // equal to the common value when every trial agrees (eps = 0).
        double sum = 0, best = 0;
        for (double x : f) {
            sum += x - f[0];
            best = std::max(best, x);
        }
        double mean = f[0] + sum / trials;
        double ss = 0;
        for (double x : f) {
            ss += (x - mean) * (x - mean);
        }
        double sd = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
        reports.push_back({eps_grid[e], trials, mean, best, sd, seed});
    }
    return reports;
}

}  // namespace chainsmith
