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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "chainsmith/errors.hpp"

namespace chainsmith {

namespace {

// Squared first component of the eigenvector at lam, from a twisted LDL^T
// factorization of H - lam. Components away from the twist index come out as
// products of ratios, so a tiny first component keeps its relative accuracy
// where the QL vectors only carry absolute accuracy.
double first_component_squared(const Vec &b, const Vec &j, double lam) {
    const Eigen::Index n = b.size();
    const double tiny = std::numeric_limits<double>::min();
    auto nonzero = [&](double x) { return x == 0 ? tiny : x; };
    Vec down(n), up(n);
    down[0] = nonzero(b[0] - lam);
    for (Eigen::Index i = 1; i < n; i++) {
        down[i] = nonzero(b[i] - lam - j[i - 1] * j[i - 1] / down[i - 1]);
    }
    up[n - 1] = nonzero(b[n - 1] - lam);
    for (Eigen::Index i = n - 2; i >= 0; i--) {
        up[i] = nonzero(b[i] - lam - j[i] * j[i] / up[i + 1]);
    }
    Eigen::Index twist = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; i++) {
        double gamma = std::abs(down[i] + up[i] - (b[i] - lam));
        if (gamma < best) {
            best = gamma;
            twist = i;
        }
    }
    Vec x(n);
    x[twist] = 1;
    for (Eigen::Index i = twist - 1; i >= 0; i--) {
        x[i] = -j[i] / down[i] * x[i + 1];
    }
    for (Eigen::Index i = twist + 1; i < n; i++) {
        x[i] = -j[i - 1] / up[i] * x[i - 1];
    }
    return x[0] * x[0] / x.squaredNorm();
}

}  // namespace

// Symmetric tridiagonal QL algorithm with implicit shifts, following the
// EISPACK routine tql2.
bool tridiagonal_ql(Vec &d, Vec e_in, Mat &z) {
    const Eigen::Index n = d.size();
    if (n <= 1) {
        return true;
    }
    Vec e = Vec::Zero(n);
    e.head(n - 1) = e_in;

    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0;
    double tst1 = 0;
    for (Eigen::Index l = 0; l < n; l++) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        Eigen::Index m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) {
            m++;
        }

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 60) {
                    return false;
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                double dl1 = d[l + 1];
                double h = g - d[l];
                for (Eigen::Index i = l + 2; i < n; i++) {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                double c = 1, c2 = 1, c3 = 1;
                double el1 = e[l + 1];
                double s = 0, s2 = 0;
                for (Eigen::Index i = m - 1; i >= l; i--) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (Eigen::Index k = 0; k < z.rows(); k++) {
                        h = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * h;
                        z(k, i) = c * z(k, i) - s * h;
                    }
                    if (i == 0) {
                        break;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0;
    }
    return true;
}

EigenSystem eigensystem(const ChainSpec &chain, const Tolerances &tol) {
    const int n = chain.size();
    Vec d = chain.fields();
    Mat z = Mat::Identity(n, n);
    if (!tridiagonal_ql(d, chain.couplings(), z)) {
        throw NumericalBreakdown("tridiagonal QL iteration did not converge");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });

    EigenSystem es;
    es.eigenvalues.resize(n);
    es.vectors.resize(n, n);
    for (int k = 0; k < n; k++) {
        es.eigenvalues[k] = d[order[k]];
        es.vectors.col(k) = z.col(order[k]);
        for (int i = 0; i < n; i++) {
            double x = es.vectors(i, k);
            if (std::abs(x) > 1e-12) {
                if (x < 0) {
                    es.vectors.col(k) *= -1;
                }
                break;
            }
        }
    }
    es.first_row_weights = es.vectors.row(0).transpose().cwiseAbs2();
    for (int k = 0; k < n; k++) {
        if (es.first_row_weights[k] < 1e-6) {
            es.first_row_weights[k] = first_component_squared(chain.fields(), chain.couplings(), es.eigenvalues[k]);
        }
    }

    double scale = es.eigenvalues.cwiseAbs().maxCoeff();
    for (int k = 0; k + 1 < n; k++) {
        if (es.eigenvalues[k] - es.eigenvalues[k + 1] < tol.degeneracy_gap * scale) {
            throw InvalidChain("numerically degenerate eigenvalues at index " + std::to_string(k + 1));
        }
    }
    double residual = (chain.dense() * es.vectors - es.vectors * es.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
    if (residual > tol.spectral_residual * std::max(scale, 1e-300) && residual > 1e-300) {
        throw NumericalBreakdown("eigensystem residual " + std::to_string(residual) + " exceeds tolerance");
    }
    return es;
}

CVec evolve(const EigenSystem &es, const CVec &input, double t) {
    const Eigen::Index n = es.eigenvalues.size();
    CVec phases(n);
    for (Eigen::Index k = 0; k < n; k++) {
        phases[k] = std::polar(1.0, -es.eigenvalues[k] * t);
    }
    CVec coords = es.vectors.transpose().cast<std::complex<double>>() * input;
    return es.vectors.cast<std::complex<double>>() * phases.cwiseProduct(coords);
}

CVec evolve(const ChainSpec &chain, const CVec &input, double t) {
    if (input.size() != chain.size()) {
        throw InvalidChain("input state length does not match chain");
    }
    return evolve(eigensystem(chain), input, t);
}

CVec evolve_site(const EigenSystem &es, int site, double t) {
    const Eigen::Index n = es.eigenvalues.size();
    CVec out = CVec::Zero(n);
    for (Eigen::Index k = 0; k < n; k++) {
        std::complex<double> c = std::polar(es.vectors(site - 1, k), -es.eigenvalues[k] * t);
        out += c * es.vectors.col(k).cast<std::complex<double>>();
    }
    return out;
}

Overlap fidelity(const EigenSystem &es, const TargetState &target) {
    if (target.size() != es.eigenvalues.size()) {
        throw InvalidTarget("target length does not match chain");
    }
    CVec out = evolve_site(es, target.input_site, target.t0);
    std::complex<double> ov = target.amplitudes.cast<std::complex<double>>().dot(out);
    return {std::abs(ov), std::arg(ov)};
}

Overlap fidelity(const ChainSpec &chain, const TargetState &target) {
    return fidelity(eigensystem(chain), target);
}

Mat v_basis(const EigenSystem &es) {
    return es.vectors.row(0).transpose().asDiagonal() * es.vectors.transpose();
}

Mat v_basis(const ChainSpec &chain) {
    return v_basis(eigensystem(chain));
}

BetaTable beta_table(const ChainSpec &chain, const ChainSpec &reference, const Tolerances &tol) {
    if (chain.size() != reference.size()) {
        throw SpectrumMismatch("chains have different lengths");
    }
    EigenSystem es = eigensystem(chain, tol);
    EigenSystem ref = eigensystem(reference, tol);
    double scale = std::max(1.0, ref.eigenvalues.cwiseAbs().maxCoeff());
    double gap = (es.eigenvalues - ref.eigenvalues).cwiseAbs().maxCoeff();
    if (gap > tol.spectrum_match * scale) {
        throw SpectrumMismatch("spectra differ by " + std::to_string(gap));
    }

    Mat v = v_basis(es);
    Mat vt = v_basis(ref);
    Eigen::PartialPivLU<Mat> lu(vt);
    BetaTable table;
    const int n = chain.size();
    table.coefficients.resize(n, n);
    for (int col = 0; col < n; col++) {
        Vec rhs = v.col(col);
        Vec x = lu.solve(rhs);
        table.coefficients.col(col) = x;
        double denom = std::max(rhs.norm(), 1e-300);
        table.solve_residual = std::max(table.solve_residual, (vt * x - rhs).norm() / denom);
    }
    return table;
}

double beta_residual(const BetaTable &table, const ChainSpec &chain, const ChainSpec &reference) {
    const int n = table.size();
    const Vec &b = chain.fields();
    const Vec &j = chain.couplings();
    const Vec &bt = reference.fields();
    const Vec &jt = reference.couplings();
    const Mat &beta = table.coefficients;
    double worst = 0;
    for (int k = 0; k < n; k++) {
        for (int m = 0; m < n; m++) {
            double r = (bt[k] - b[m]) * beta(k, m);
            if (m > 0) {
                r -= j[m - 1] * beta(k, m - 1);
            }
            if (m + 1 < n) {
                r -= j[m] * beta(k, m + 1);
            }
            if (k > 0) {
                r += beta(k - 1, m) * jt[k - 1];
            }
            if (k + 1 < n) {
                r += beta(k + 1, m) * jt[k];
            }
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

}  // namespace chainsmith
