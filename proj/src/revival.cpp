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

#include "chainsmith/revival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>
#include <unsupported/Eigen/Polynomials>

#include "chainsmith/errors.hpp"
#include "chainsmith/spectral.hpp"
#include "reference.hpp"

namespace chainsmith {

using internal::Reference;
using internal::try_build;

namespace {

constexpr double kSupportTol = 1e-14;

bool symmetric_spectrum(const PstSpectrum &spectrum) {
    Vec lam = spectrum.eigenvalues();
    const Eigen::Index n = lam.size();
    for (Eigen::Index k = 0; k < n; k++) {
        if (std::abs(lam[k] + lam[n - 1 - k]) > 1e-12 * std::max(1.0, std::abs(lam[k]))) {
            return false;
        }
    }
    return true;
}

void check_alpha_n(double alpha_n) {
    if (std::abs(alpha_n) < 1e-6) {
        throw InvalidTarget(
            "target amplitude on the far end site is zero; every chain fed at site 1 "
            "must keep overlap with the far end");
    }
}

// A candidate design before gauge fixing.
struct Candidate {
    LanczosResult built;
    Vec weights;
    DesignDiagnostics diagnostics;
};

bool same_chain(const ChainSpec &a, const ChainSpec &b, double tol) {
    return (a.fields() - b.fields()).cwiseAbs().maxCoeff() <= tol &&
           (a.couplings().cwiseAbs() - b.couplings().cwiseAbs()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<DesignResult> finish_all(
    std::vector<Candidate> &candidates, const Reference &ref, const TargetState &target, double min_fidelity) {
    std::vector<DesignResult> out;
    for (auto &c : candidates) {
        bool dup = false;
        for (const auto &d : out) {
            if (same_chain(d.chain.positive_gauge(), c.built.chain, 1e-7 * std::max(1.0, c.built.chain.max_abs_coupling()))) {
                dup = true;
                break;
            }
        }
        if (dup) {
            continue;
        }
        DesignResult r = finish_design(c.built, c.weights, ref.chain, target, std::move(c.diagnostics));
        if (r.fidelity >= min_fidelity) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

void sort_by_speed(std::vector<DesignResult> &results) {
    std::stable_sort(results.begin(), results.end(), [](const DesignResult &a, const DesignResult &b) {
        return a.chain.max_abs_coupling() < b.chain.max_abs_coupling();
    });
}

// Normalization function of the triple family,
// g(beta) = alphaN^2 sum_n vb(n,N)^2 / (w0_n + beta u_n) - 1.
struct TripleEquation {
    Vec w0;
    Vec u;
    Vec c;
    double an2;

    double operator()(double beta) const {
        return an2 * (c.array() / (w0.array() + beta * u.array())).sum() - 1;
    }
    double derivative(double beta) const {
        Vec d = w0.array() + beta * u.array();
        return -an2 * (c.array() * u.array() / d.array().square()).sum();
    }
};

double bisect(const TripleEquation &g, double a, double b) {
    double fa = g(a);
    for (int it = 0; it < 200; it++) {
        double m = 0.5 * (a + b);
        if (m == a || m == b) {
            break;
        }
        double fm = g(m);
        if (fm == 0) {
            return m;
        }
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double newton_polish(const TripleEquation &g, double x) {
    for (int it = 0; it < 8; it++) {
        double d = g.derivative(x);
        if (d == 0 || !std::isfinite(d)) {
            break;
        }
        double step = g(x) / d;
        if (!std::isfinite(step)) {
            break;
        }
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return x;
}

// Roots of the cleared polynomial alphaN^2 sum_n c_n prod_{m!=n}(w0_m + beta u_m) - prod_m(...).
std::vector<double> triple_polynomial_roots(const TripleEquation &g) {
    const Eigen::Index n = g.w0.size();
    auto mul = [](const std::vector<double> &p, double c0, double c1) {
        std::vector<double> r(p.size() + 1, 0.0);
        for (size_t i = 0; i < p.size(); i++) {
            r[i] += p[i] * c0;
            r[i + 1] += p[i] * c1;
        }
        return r;
    };
    std::vector<double> full{1.0};
    for (Eigen::Index m = 0; m < n; m++) {
        full = mul(full, g.w0[m], g.u[m]);
    }
    std::vector<double> poly(full.size(), 0.0);
    for (size_t i = 0; i < full.size(); i++) {
        poly[i] = -full[i];
    }
    for (Eigen::Index k = 0; k < n; k++) {
        std::vector<double> part{g.an2 * g.c[k]};
        for (Eigen::Index m = 0; m < n; m++) {
            if (m != k) {
                part = mul(part, g.w0[m], g.u[m]);
            }
        }
        for (size_t i = 0; i < part.size(); i++) {
            poly[i] += part[i];
        }
    }
    double scale = 0;
    for (double v : poly) {
        scale = std::max(scale, std::abs(v));
    }
    while (poly.size() > 1 && std::abs(poly.back()) <= 1e-13 * scale) {
        poly.pop_back();
    }
    std::vector<double> roots;
    if (poly.size() < 2) {
        return roots;
    }
    Eigen::VectorXd coeffs = Eigen::Map<Eigen::VectorXd>(poly.data(), static_cast<Eigen::Index>(poly.size()));
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    for (Eigen::Index i = 0; i < solver.roots().size(); i++) {
        auto z = solver.roots()[i];
        if (std::abs(z.imag()) <= 1e-7 * (1 + std::abs(z.real()))) {
            roots.push_back(z.real());
        }
    }
    return roots;
}

}  // namespace

RevivalSpec::RevivalSpec(PstSpectrum reference, std::vector<std::pair<int, double>> support)
    : reference_(std::move(reference)), amplitudes_(Vec::Zero(reference_.size())) {
    for (auto [site, amp] : support) {
        if (site < 1 || site > size()) {
            throw InvalidTarget("support site " + std::to_string(site) + " outside the chain");
        }
        amplitudes_[site - 1] += amp;
    }
    *this = RevivalSpec(reference_, amplitudes_);
}

RevivalSpec::RevivalSpec(PstSpectrum reference, const Vec &amplitudes)
    : reference_(std::move(reference)), amplitudes_(amplitudes) {
    if (amplitudes_.size() != reference_.size()) {
        throw InvalidTarget("target length does not match the reference spectrum");
    }
    if (!amplitudes_.allFinite()) {
        throw InvalidTarget("target amplitudes must be finite");
    }
    double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1) > 1e-9) {
        throw InvalidTarget("target amplitudes are not unit norm");
    }
    amplitudes_ /= std::sqrt(norm2);
    check_alpha_n(amplitudes_[size() - 1]);
}

TargetState RevivalSpec::target() const {
    return TargetState(amplitudes_, 1, reference_.t0());
}

int RevivalSpec::first_support_after_one() const {
    for (int j = 2; j <= size(); j++) {
        if (std::abs(amplitudes_[j - 1]) > kSupportTol) {
            return j;
        }
    }
    return size();
}

RevivalFamily RevivalSpec::family() const {
    const int n = size();
    std::vector<int> sites;
    for (int j = 2; j <= n; j++) {
        if (std::abs(amplitudes_[j - 1]) > kSupportTol) {
            sites.push_back(j);
        }
    }
    if (sites.size() == 1) {
        return RevivalFamily::EndPair;
    }
    int r = sites.front();
    if (sites.size() == 2 && r == n - 1) {
        return RevivalFamily::Triple;
    }
    if (sites.size() == 2 && (r == 2 || r == 3)) {
        return RevivalFamily::SmallR;
    }
    if (r == 2 && sites.size() == 3 && sites[1] == n - 1 && n > 4) {
        return RevivalFamily::Combined;
    }
    if (2 * (n + 1 - r) < n) {
        return RevivalFamily::LastK;
    }
    return RevivalFamily::General;
}

bool RevivalSpec::has_parity_pattern() const {
    for (int site = size() - 1; site >= 1; site -= 2) {
        if (std::abs(amplitudes_[site - 1]) > kSupportTol) {
            return false;
        }
    }
    return true;
}

ParityMask parity_reduce(const RevivalSpec &spec) {
    if (!spec.has_parity_pattern()) {
        throw PatternMismatch("target does not vanish on sites N-1, N-3, ...");
    }
    if (!symmetric_spectrum(spec.reference())) {
        throw PatternMismatch("parity reduction needs a reference spectrum symmetric about zero (zero fields)");
    }
    const int n = spec.size();
    ParityMask mask;
    mask.table.resize(n, n);
    for (int m = 1; m <= n; m++) {
        for (int k = 1; k <= n; k++) {
            mask.table(m - 1, k - 1) = (m + k) % 2 == 0;
        }
    }
    int r = spec.first_support_after_one();
    for (int m = 2; m <= n + 1 - r; m++) {
        if (m % 2 == 1) {
            mask.free_parameters.push_back(m);
        }
    }
    return mask;
}

DesignResult design_end_pair(double alpha1, const PstSpectrum &spectrum) {
    if (!(std::abs(alpha1) < 1)) {
        throw InvalidTarget("end-pair revival needs |alpha1| < 1");
    }
    double alpha_n = std::sqrt(1 - alpha1 * alpha1);
    check_alpha_n(alpha_n);
    Reference ref(spectrum);
    const int n = ref.size();
    Vec w = ref.vb.col(0) + alpha1 * ref.vb.col(n - 1);
    if (w.minCoeff() <= 0) {
        // With an alternating reference this is impossible for |alpha1| < 1.
        throw InvalidWeights("end-pair weights are not positive; reference is not mirror symmetric");
    }
    Vec amps = Vec::Zero(n);
    amps[0] = alpha1;
    amps[n - 1] = alpha_n;
    LanczosResult built = lanczos_with_basis(SpectralData(ref.eigenvalues(), w / w.sum()));
    DesignDiagnostics diag;
    diag.method = "end-pair";
    return finish_design(built, w / w.sum(), ref.chain, TargetState(amps, 1, spectrum.t0()), diag);
}

std::vector<TripleRoot> triple_normalization_roots(
    double alpha1, double alpha_n1, double alpha_n, const PstSpectrum &spectrum) {
    check_alpha_n(alpha_n);
    double total = alpha1 * alpha1 + alpha_n1 * alpha_n1 + alpha_n * alpha_n;
    if (std::abs(total - 1) > 1e-9) {
        throw InvalidTarget("triple amplitudes are not unit norm");
    }
    Reference ref(spectrum);
    const int n = ref.size();
    if (n < 4) {
        throw InvalidTarget("triple revival needs at least four sites");
    }
    TripleEquation g;
    g.w0 = ref.vb.col(0) + alpha1 * ref.vb.col(n - 1);
    g.u = ref.vb.col(1) + alpha1 * ref.vb.col(n - 2);
    g.c = ref.vb.col(n - 1).cwiseAbs2();
    g.an2 = alpha_n * alpha_n;

    std::vector<double> poles;
    for (int k = 0; k < n; k++) {
        if (std::abs(g.u[k]) > 1e-14 * std::abs(g.w0[k])) {
            poles.push_back(-g.w0[k] / g.u[k]);
        }
    }
    std::sort(poles.begin(), poles.end());

    std::vector<double> roots;
    auto scan = [&](auto point, int samples) {
        double prev_x = point(0);
        double prev_f = g(prev_x);
        for (int i = 1; i <= samples; i++) {
            double x = point(i);
            double f = g(x);
            if (std::isfinite(f) && std::isfinite(prev_f)) {
                if (f == 0) {
                    roots.push_back(x);
                } else if ((f < 0) != (prev_f < 0) && prev_f != 0) {
                    roots.push_back(bisect(g, prev_x, x));
                }
            }
            prev_x = x;
            prev_f = f;
        }
    };
    const int samples = 400;
    const double pi = std::numbers::pi;
    if (poles.empty()) {
        scan([&](int i) { return std::tan(pi * (static_cast<double>(i) / samples - 0.5) * 0.999999); }, samples);
    } else {
        double span = std::max(1.0, poles.back() - poles.front());
        auto open_end = [&](double edge, double dir) {
            scan(
                [&](int i) {
                    double s = (i + 0.5) / (samples + 1.0);
                    return edge + dir * span * s / (1 - s) * 1e-3 * std::pow(1e6, s);
                },
                samples);
        };
        open_end(poles.front(), -1);
        open_end(poles.back(), 1);
        for (size_t p = 0; p + 1 < poles.size(); p++) {
            double a = poles[p], b = poles[p + 1];
            if (b - a <= 1e-15 * std::max(1.0, std::abs(a))) {
                continue;
            }
            scan(
                [&](int i) {
                    double s = (i + 0.5) / (samples + 1.0);
                    return a + (b - a) * 0.5 * (1 - std::cos(pi * s));
                },
                samples);
        }
        // The interval containing beta = 0 (all weights positive) is convex;
        // look for a tangential double root at its minimum.
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (double p : poles) {
            if (p < 0) {
                lo = std::max(lo, p);
            } else if (p > 0) {
                hi = std::min(hi, p);
            }
        }
        if (std::isfinite(lo) && std::isfinite(hi)) {
            double a = lo, b = hi;
            for (int it = 0; it < 200; it++) {
                double m1 = a + (b - a) * 0.381966, m2 = b - (b - a) * 0.381966;
                if (g(m1) < g(m2)) {
                    b = m2;
                } else {
                    a = m1;
                }
            }
            double xm = 0.5 * (a + b);
            if (std::abs(g(xm)) < 1e-12) {
                roots.push_back(xm);
            }
        }
    }
    if (n <= 8) {
        for (double x : triple_polynomial_roots(g)) {
            roots.push_back(x);
        }
    }

    std::vector<TripleRoot> out;
    for (double x : roots) {
        x = newton_polish(g, x);
        if (!std::isfinite(x) || std::abs(g(x)) > 1e-9) {
            continue;
        }
        bool dup = false;
        for (const auto &r : out) {
            if (std::abs(r.beta2 - x) <= 1e-9 * std::max(1.0, std::abs(x))) {
                dup = true;
            }
        }
        if (dup) {
            continue;
        }
        Vec w = g.w0 + x * g.u;
        out.push_back({x, w.minCoeff() > 1e-12, w.minCoeff()});
    }
    std::sort(out.begin(), out.end(), [](const TripleRoot &a, const TripleRoot &b) {
        return std::abs(a.beta2) < std::abs(b.beta2);
    });
    return out;
}

std::vector<DesignResult> design_triple(double alpha1, double alpha_n1, double alpha_n, const PstSpectrum &spectrum) {
    std::vector<TripleRoot> roots = triple_normalization_roots(alpha1, alpha_n1, alpha_n, spectrum);
    Reference ref(spectrum);
    const int n = ref.size();
    Vec amps = Vec::Zero(n);
    amps[0] = alpha1;
    amps[n - 2] = alpha_n1;
    amps[n - 1] = alpha_n;
    amps /= amps.norm();
    TargetState target(amps, 1, spectrum.t0());

    std::vector<DesignResult> out;
    for (const auto &root : roots) {
        if (!root.feasible) {
            continue;
        }
        Vec w = ref.vb.col(0) + alpha1 * ref.vb.col(n - 1) + root.beta2 * (ref.vb.col(1) + alpha1 * ref.vb.col(n - 2));
        auto built = try_build(ref.eigenvalues(), w);
        if (!built) {
            continue;
        }
        DesignDiagnostics diag;
        diag.method = "triple";
        diag.parameters = {root.beta2};
        out.push_back(finish_design(*built, w / w.sum(), ref.chain, target, diag));
    }
    if (out.empty()) {
        throw NoValidRoot("no real root of the triple normalization equation gives positive weights");
    }
    return out;
}

namespace {

// First-column parametrization beta = beta0 + T p for the structured solver.
struct BetaModel {
    Vec beta0;
    Mat t;
    Mat directions;
    std::vector<int> free_sites;
};

BetaModel make_beta_model(const RevivalSpec &spec, const Reference &ref, bool parity) {
    const int n = spec.size();
    const double a1 = spec.amplitudes()[0];
    const int r = spec.first_support_after_one();
    BetaModel model;
    model.beta0 = Vec::Zero(n);
    model.beta0[0] = 1;
    model.beta0[n - 1] += a1;
    for (int m = 2; m <= n + 1 - r; m++) {
        if (parity && m % 2 == 0) {
            continue;
        }
        model.free_sites.push_back(m);
    }
    model.t = Mat::Zero(n, static_cast<Eigen::Index>(model.free_sites.size()));
    for (size_t i = 0; i < model.free_sites.size(); i++) {
        int m = model.free_sites[i];
        model.t(m - 1, i) = 1;
        if (m < r) {
            model.t(n - m, i) = a1;
        }
    }
    model.directions = ref.vb * model.t;
    return model;
}

struct StructuredState {
    Vec p;
    Vec w;
    std::optional<LanczosResult> built;
    Vec amps;
};

bool evaluate(const Reference &ref, const BetaModel &model, const Vec &p, StructuredState &s) {
    s.p = p;
    s.w = ref.vb * (model.beta0 + model.t * p);
    s.built = try_build(ref.eigenvalues(), s.w);
    if (!s.built) {
        return false;
    }
    s.w /= s.w.sum();
    s.amps = synthesis_amplitudes(s.built->basis, s.w);
    return true;
}

// Gauss-Newton with minimum-norm steps and backtracking on the residual
// a_j - target_j, j = 2..N.
bool solve_amplitudes(
    const Reference &ref, const BetaModel &model, const Vec &target, StructuredState &s, int max_it, double tol, int &iters) {
    const int n = ref.size();
    auto residual = [&](const StructuredState &st) { return Vec(st.amps.tail(n - 1) - target.tail(n - 1)); };
    Vec r = residual(s);
    double nr = r.norm();
    for (int it = 0; it < max_it; it++) {
        if (nr <= tol) {
            return true;
        }
        iters++;
        Mat jac = amplitude_jacobian(s.built->basis, s.w, model.directions).bottomRows(n - 1);
        Vec step = jac.completeOrthogonalDecomposition().solve(-r);
        double lam = 1;
        bool accepted = false;
        for (int h = 0; h < 40; h++) {
            StructuredState trial;
            if (evaluate(ref, model, s.p + lam * step, trial)) {
                Vec rt = residual(trial);
                if (rt.norm() < nr) {
                    s = std::move(trial);
                    r = rt;
                    nr = rt.norm();
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if (!accepted) {
            return nr <= tol * 100;
        }
    }
    return nr <= tol;
}

Vec homotopy_target(double alpha1, const Vec &signed_target, double tau) {
    const Eigen::Index n = signed_target.size();
    double rest = std::sqrt(std::max(0.0, 1 - alpha1 * alpha1));
    Vec start = Vec::Zero(n);
    start[n - 1] = rest;
    Vec mix = (1 - tau) * start + tau * signed_target;
    mix[0] = 0;
    double norm = mix.norm();
    if (norm > 0) {
        mix *= rest / norm;
    }
    mix[0] = alpha1;
    return mix;
}

}  // namespace

std::vector<DesignResult> design_structured(const RevivalSpec &spec, const StructuredOptions &options) {
    if (options.parity) {
        parity_reduce(spec);
    }
    Reference ref(spec.reference());
    const int n = ref.size();
    const Vec &alpha = spec.amplitudes();
    BetaModel model = make_beta_model(spec, ref, options.parity);

    std::vector<int> interior;
    for (int j = 2; j < n; j++) {
        if (std::abs(alpha[j - 1]) > kSupportTol) {
            interior.push_back(j);
        }
    }
    const size_t max_enumerated = 10;
    size_t patterns = interior.size() <= max_enumerated ? (size_t{1} << interior.size()) : 1;

    std::vector<Candidate> candidates;
    double best_residual = std::numeric_limits<double>::infinity();
    Vec best_weights;
    int total_iters = 0;
    for (size_t pattern = 0; pattern < patterns; pattern++) {
        Vec signed_target = alpha.cwiseAbs();
        signed_target[0] = alpha[0];
        if (interior.size() <= max_enumerated) {
            for (size_t i = 0; i < interior.size(); i++) {
                if ((pattern >> i) & 1) {
                    signed_target[interior[i] - 1] *= -1;
                }
            }
        } else {
            for (int j : interior) {
                signed_target[j - 1] = alpha[j - 1];
            }
        }

        StructuredState s;
        if (!evaluate(ref, model, Vec::Zero(static_cast<Eigen::Index>(model.free_sites.size())), s)) {
            continue;
        }
        double tau = 0;
        double dtau = 1.0 / options.continuation_steps;
        bool ok = true;
        int iters = 0;
        while (tau < 1) {
            double next = std::min(1.0, tau + dtau);
            StructuredState trial = s;
            double tol = next < 1 ? 1e-9 : options.tolerance;
            if (solve_amplitudes(ref, model, homotopy_target(alpha[0], signed_target, next), trial, options.max_iterations, tol, iters)) {
                s = std::move(trial);
                tau = next;
            } else {
                dtau *= 0.5;
                if (dtau < 1e-4) {
                    ok = false;
                    break;
                }
            }
        }
        total_iters += iters;
        Vec final_res = s.amps - homotopy_target(alpha[0], signed_target, 1);
        if (final_res.norm() < best_residual) {
            best_residual = final_res.norm();
            best_weights = s.w;
        }
        if (!ok) {
            continue;
        }
        DesignDiagnostics diag;
        diag.method = options.parity ? "structured-parity" : "structured";
        diag.iterations = iters;
        diag.residual = final_res.norm();
        diag.parameters.assign(s.p.data(), s.p.data() + s.p.size());
        candidates.push_back(Candidate{*s.built, s.w, diag});
    }
    auto results = finish_all(candidates, ref, spec.target(), 1 - 1e-7);
    if (results.empty()) {
        throw ConvergenceFailure("structured solver found no solution", best_residual, best_weights, total_iters);
    }
    if (options.parity) {
        for (auto &r : results) {
            if (r.chain.fields().cwiseAbs().maxCoeff() > 1e-8) {
                r.diagnostics.notes = "parity design has nonzero fields";
            }
        }
    }
    sort_by_speed(results);
    return results;
}

namespace {

// Small-r system: alpha2 (H~ - B1)/J1 beta - (S - alpha1) beta = rhs, with
// optional unknown c = beta^{(N-1)}_{N-1} for the combined family.
struct SmallRFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const Reference *ref;
    Mat h;
    double a1, a2, an1, an;
    bool combined;

    int inputs() const {
        return combined ? 3 : 2;
    }
    int values() const {
        return combined ? 5 : 4;
    }

    Vec beta_of(const Vec &x) const {
        const int n = ref->size();
        Mat s = Mat::Zero(n, n);
        for (int i = 0; i < n; i++) {
            s(i, n - 1 - i) = 1;
        }
        Mat m = a2 * (h - x[0] * Mat::Identity(n, n)) / x[1] - (s - a1 * Mat::Identity(n, n));
        Vec rhs = Vec::Zero(n);
        rhs[n - 1] = -(an * an + an1 * an1);
        if (combined) {
            rhs[n - 2] = -an1 * x[2];
        }
        return m.partialPivLu().solve(rhs);
    }

    int operator()(const Vec &x, Vec &f) const {
        const int n = ref->size();
        f.resize(values());
        if (x[1] == 0) {
            f.setConstant(1e6);
            return 0;
        }
        Vec beta = beta_of(x);
        Vec w = ref->vb * beta;
        const Vec &lam = ref->eigenvalues();
        double b1 = lam.dot(w);
        double j1sq = lam.cwiseAbs2().dot(w) - b1 * b1;
        f[0] = beta[0] - 1;
        f[1] = beta[n - 1] - a1;
        f[2] = x[0] - b1;
        f[3] = x[1] * x[1] - j1sq;
        if (combined) {
            f[4] = an * an * (ref->vb.col(n - 1).cwiseAbs2().array() / w.array()).sum() - 1;
        }
        if (!f.allFinite()) {
            f.setConstant(1e6);
        }
        return 0;
    }
};

std::vector<DesignResult> solve_small_r_system(const Vec &alpha, const PstSpectrum &spectrum, bool combined) {
    Reference ref(spectrum);
    const int n = ref.size();
    TargetState target(alpha / alpha.norm(), 1, spectrum.t0());
    double lmax = ref.eigenvalues().cwiseAbs().maxCoeff();

    std::vector<Candidate> candidates;
    double best = std::numeric_limits<double>::infinity();
    Vec best_w;
    int total = 0;
    std::vector<double> a2_signs{1, -1};
    std::vector<double> an1_signs = combined ? std::vector<double>{1, -1} : std::vector<double>{1};
    std::vector<double> c_grid = combined ? std::vector<double>{-1.0, -0.3, 0.3, 1.0} : std::vector<double>{0.0};
    const int grid = 24;
    for (double s2 : a2_signs) {
        for (double sn1 : an1_signs) {
            SmallRFunctor fun{&ref, ref.chain.dense(), alpha[0], s2 * std::abs(alpha[1]),
                              combined ? sn1 * std::abs(alpha[n - 2]) : 0.0, alpha[n - 1], combined};
            Eigen::NumericalDiff<SmallRFunctor> diff(fun, 1e-14);
            for (int ib = 0; ib < grid; ib++) {
                for (int ij = 0; ij < grid; ij++) {
                    for (double c0 : c_grid) {
                        Vec x(fun.inputs());
                        x[0] = -lmax + 2 * lmax * (ib + 0.5) / grid;
                        x[1] = lmax * (ij + 0.5) / grid;
                        if (combined) {
                            x[2] = c0;
                        }
                        Eigen::LevenbergMarquardt<Eigen::NumericalDiff<SmallRFunctor>, double> lm(diff);
                        lm.parameters.xtol = 1e-15;
                        lm.parameters.ftol = 1e-15;
                        lm.parameters.maxfev = 400;
                        lm.minimize(x);
                        total += static_cast<int>(lm.nfev);
                        Vec f;
                        fun(x, f);
                        if (f.norm() > 1e-9 || x[1] <= 0) {
                            continue;
                        }
                        Vec w = ref.vb * fun.beta_of(x);
                        if (w.minCoeff() <= 0) {
                            continue;
                        }
                        auto built = try_build(ref.eigenvalues(), w);
                        if (!built) {
                            continue;
                        }
                        Vec wn = w / w.sum();
                        double mismatch = (synthesis_amplitudes(built->basis, wn).cwiseAbs() - alpha.cwiseAbs()).norm();
                        if (mismatch < best) {
                            best = mismatch;
                            best_w = wn;
                        }
                        DesignDiagnostics diag;
                        diag.method = combined ? "small-r-combined" : "small-r";
                        diag.iterations = static_cast<int>(lm.iter);
                        diag.residual = f.norm();
                        diag.parameters.assign(x.data(), x.data() + x.size());
                        candidates.push_back(Candidate{*built, wn, diag});
                    }
                }
            }
        }
    }
    auto results = finish_all(candidates, ref, target, 1 - 1e-7);
    if (results.empty()) {
        if (candidates.empty()) {
            throw NoValidRoot("no (B1, J1) root of the small-r system gives positive weights");
        }
        throw ConvergenceFailure("small-r roots did not reproduce the target", best, best_w, total);
    }
    sort_by_speed(results);
    return results;
}

}  // namespace

std::vector<DesignResult> design_small_r(
    double alpha1, double alpha_r, double alpha_n, int r, const PstSpectrum &spectrum) {
    if (r != 2 && r != 3) {
        throw InvalidTarget("small-r designer handles r = 2 or 3");
    }
    check_alpha_n(alpha_n);
    const int n = spectrum.size();
    if (n < r + 2) {
        throw InvalidTarget("chain too short for the small-r family");
    }
    if (alpha_r == 0) {
        return {design_end_pair(alpha1, spectrum)};
    }
    Vec alpha = Vec::Zero(n);
    alpha[0] = alpha1;
    alpha[r - 1] = alpha_r;
    alpha[n - 1] = alpha_n;
    if (std::abs(alpha.squaredNorm() - 1) > 1e-9) {
        throw InvalidTarget("small-r amplitudes are not unit norm");
    }
    alpha /= alpha.norm();
    if (r == 2) {
        return solve_small_r_system(alpha, spectrum, false);
    }
    RevivalSpec spec(spectrum, alpha);
    StructuredOptions opts;
    opts.parity = spec.has_parity_pattern() && symmetric_spectrum(spectrum);
    return design_structured(spec, opts);
}

std::vector<DesignResult> design_last_k(const Vec &amplitudes, const PstSpectrum &spectrum) {
    RevivalSpec spec(spectrum, amplitudes);
    const int n = spec.size();
    const Vec &alpha = spec.amplitudes();
    if (spec.family() == RevivalFamily::Combined) {
        return solve_small_r_system(alpha, spectrum, true);
    }
    int r = spec.first_support_after_one();
    int k = n + 1 - r;
    if (2 * k >= n) {
        throw InvalidTarget("last-k family needs k < N/2, got k = " + std::to_string(k));
    }
    if (k == 1) {
        return {design_end_pair(alpha[0], spectrum)};
    }
    if (k == 2) {
        return design_triple(alpha[0], alpha[n - 2], alpha[n - 1], spectrum);
    }
    return design_structured(spec);
}

}  // namespace chainsmith
