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

// Command-line front end: design chains, simulate them, and produce the
// speed and robustness reports.
//
// Exit codes follow sysexits: 0 success, 1 verification below threshold,
// 2 solver did not converge, 64 usage, 65 infeasible or invalid target data,
// 66 missing or unreadable input file.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chainsmith/analysis.hpp"
#include "chainsmith/errors.hpp"
#include "chainsmith/io.hpp"
#include "chainsmith/mirror.hpp"
#include "chainsmith/numeric.hpp"
#include "chainsmith/pst.hpp"
#include "chainsmith/revival.hpp"
#include "chainsmith/spectral.hpp"

using namespace chainsmith;
using nlohmann::json;

namespace {

constexpr int kExitBelowThreshold = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Values that may come from CHAINSMITH_CONFIG; flags overwrite them after parsing.
struct Settings {
    Tolerances tolerances;
    double t0 = kHalfPi;
    double threshold = 1 - 1e-7;
    int max_iterations = 200;
    double residual_tol = 1e-12;
    int steps = 201;
    std::vector<double> eps = {0.001, 0.005, 0.01, 0.02};
    int trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string field_mode = "fallback";
    bool shared_draw = false;
    double theta = std::numbers::pi / 4;
};

Settings load_settings() {
    Settings s;
    const char *path = std::getenv("CHAINSMITH_CONFIG");
    if (!path || !*path) {
        return s;
    }
    json cfg = read_json_file(path);
    try {
        s.tolerances = tolerances_from_json(cfg, s.tolerances);
        s.t0 = cfg.value("t0", s.t0);
        if (cfg.contains("design")) {
            const json &d = cfg["design"];
            s.threshold = d.value("threshold", s.threshold);
            s.max_iterations = d.value("max_iterations", s.max_iterations);
            s.residual_tol = d.value("residual_tol", s.residual_tol);
        }
        if (cfg.contains("simulate")) {
            s.steps = cfg["simulate"].value("steps", s.steps);
        }
        if (cfg.contains("robustness")) {
            const json &r = cfg["robustness"];
            s.eps = r.value("eps", s.eps);
            s.trials = r.value("trials", s.trials);
            s.seed = r.value("seed", s.seed);
            s.threads = r.value("threads", s.threads);
            s.field_mode = r.value("fields", s.field_mode);
            s.shared_draw = r.value("shared_draw", s.shared_draw);
        }
        if (cfg.contains("extend")) {
            s.theta = cfg["extend"].value("theta", s.theta);
        }
    } catch (const json::exception &e) {
        throw FileError(std::string("bad config ") + path + ": " + e.what());
    }
    return s;
}

std::vector<double> parse_list(const std::string &text, const char *flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char *end = nullptr;
        double x = std::strtod(item.c_str(), &end);
        if (item.empty() || end == item.c_str() || *end != '\0' || !std::isfinite(x)) {
            throw UsageError(std::string("cannot parse ") + flag + " entry '" + item + "'");
        }
        out.push_back(x);
    }
    if (out.empty()) {
        throw UsageError(std::string(flag) + " is empty");
    }
    return out;
}

Vec to_vec(const std::vector<double> &v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Vec &v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// Eigenvalues given as numbers; they must sit on the grid (pi/t0)(m + shift).
PstSpectrum spectrum_from_eigenvalues(const std::vector<double> &lam, double t0) {
    std::vector<long> m(lam.size());
    double x0 = lam[0] * t0 / std::numbers::pi;
    bool half = std::abs(std::abs(x0 - std::floor(x0)) - 0.5) < 1e-9;
    for (size_t k = 0; k < lam.size(); k++) {
        double x = lam[k] * t0 / std::numbers::pi - (half ? 0.5 : 0.0);
        m[k] = std::lround(x);
        if (std::abs(x - static_cast<double>(m[k])) > 1e-9) {
            throw InvalidSpectrum("eigenvalue " + format_double(lam[k]) + " is not on the grid pi/t0 * integer");
        }
    }
    return PstSpectrum(m, half, t0);
}

json spectrum_json(const PstSpectrum &s) {
    return {{"m", s.integers()}, {"half_shift", s.half_shift()}};
}

std::optional<PstSpectrum> spectrum_from_meta(const json &meta, double t0) {
    if (!meta.contains("spectrum")) {
        return std::nullopt;
    }
    return PstSpectrum(meta["spectrum"]["m"].get<std::vector<long>>(), meta["spectrum"].value("half_shift", false), t0);
}

// Amplitudes from --alpha (rescaled when within 1e-3 of unit norm, which
// absorbs rounded inputs like 0.7071) or a named target.
Vec resolve_alpha(const std::string &alpha, const std::string &named, int n, bool normalize) {
    if (!alpha.empty() && !named.empty()) {
        throw UsageError("give either --alpha or --target, not both");
    }
    if (!named.empty()) {
        if (n < 1) {
            throw UsageError("--target needs --n");
        }
        if (named == "w-state") {
            return TargetState::w_state(n).amplitudes;
        }
        if (named == "end") {
            return Vec::Unit(n, n - 1);
        }
        throw UsageError("unknown target '" + named + "' (expected w-state or end)");
    }
    if (alpha.empty()) {
        throw UsageError("a target is required (--alpha or --target)");
    }
    Vec a = to_vec(parse_list(alpha, "--alpha"));
    if (n > 0 && a.size() != n) {
        throw InvalidTarget("--alpha has " + std::to_string(a.size()) + " entries but --n is " + std::to_string(n));
    }
    double norm = a.norm();
    if (norm == 0) {
        throw InvalidTarget("target amplitudes are all zero");
    }
    if (normalize || std::abs(norm - 1) <= 1e-3) {
        a /= norm;
    }
    return a;
}

void require_end_overlap(const Vec &a) {
    if (std::abs(a[a.size() - 1]) < 1e-6) {
        throw InvalidTarget(
            "infeasible target: alpha_N = 0. A chain excited at site 1 always overlaps the end site, since "
            "prod J_n = alpha_N prod J~_n; no design exists");
    }
}

struct ResolvedTarget {
    Vec amplitudes;
    int input_site;
};

// Target for a chain file: explicit flags first, then the file's meta.
ResolvedTarget target_for(const ChainFile &file, const std::string &alpha, const std::string &named, bool normalize) {
    const int n = file.chain.size();
    if (!alpha.empty() || !named.empty()) {
        return {resolve_alpha(alpha, named, n, normalize), file.meta.value("input_site", 1)};
    }
    if (file.meta.contains("target")) {
        return {to_vec(file.meta["target"].get<std::vector<double>>()), file.meta.value("input_site", 1)};
    }
    throw UsageError("chain file carries no target; pass --alpha or --target");
}

void write_text(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw FileError("cannot write " + path);
    }
    out << text;
}

json design_summary(const DesignResult &d) {
    return {
        {"method", d.diagnostics.method},
        {"fidelity", d.fidelity},
        {"phase", d.phase},
        {"j_max", d.chain.max_abs_coupling()},
        {"j_max_t0", d.chain.max_abs_coupling() * d.target.t0},
        {"iterations", d.diagnostics.iterations},
        {"residual", d.diagnostics.residual},
        {"parameters", d.diagnostics.parameters},
    };
}

struct DesignArgs {
    int n = 0;
    std::string alpha;
    std::string target;
    std::string spectrum;
    double alpha1 = 0;
    bool normalize = false;
    bool parity = false;
    std::string start = "geometric";
    int index = 0;
    std::string out = "chain.json";
    std::string report;
};

int run_design(const std::string &kind, const DesignArgs &args, const Settings &cfg) {
    std::optional<PstSpectrum> spectrum;
    if (!args.spectrum.empty()) {
        spectrum = spectrum_from_eigenvalues(parse_list(args.spectrum, "--spectrum"), cfg.t0);
    }
    int n = args.n;
    if (spectrum) {
        if (n > 0 && spectrum->size() != n) {
            throw InvalidSpectrum("--spectrum has " + std::to_string(spectrum->size()) + " values but --n is " + std::to_string(n));
        }
        n = spectrum->size();
    }

    std::vector<DesignResult> results;
    if (kind == "pst") {
        if (n < 2) {
            throw UsageError("design pst needs --n >= 2 or --spectrum");
        }
        PstSpectrum s = spectrum.value_or(PstSpectrum::linear(n, cfg.t0));
        spectrum = s;
        results.push_back(design_end_pair(0, s));
    } else if (kind == "end-pair") {
        if (n < 2) {
            throw UsageError("design end-pair needs --n or --spectrum");
        }
        PstSpectrum s = spectrum.value_or(PstSpectrum::linear(n, cfg.t0));
        spectrum = s;
        double a1 = args.alpha1;
        if (!args.alpha.empty()) {
            Vec a = resolve_alpha(args.alpha, "", n, args.normalize);
            require_end_overlap(a);
            RevivalSpec spec(s, a);
            if (spec.family() != RevivalFamily::EndPair) {
                throw InvalidTarget("target is not supported on sites 1 and N only");
            }
            a1 = a[0] * (a[n - 1] < 0 ? -1 : 1);
        }
        results.push_back(design_end_pair(a1, s));
    } else {
        Vec a = resolve_alpha(args.alpha, args.target, n, args.normalize);
        n = static_cast<int>(a.size());
        require_end_overlap(a);
        PstSpectrum s = spectrum.value_or(PstSpectrum::linear(n, cfg.t0));
        spectrum = s;
        if (kind == "triple") {
            RevivalSpec spec(s, a);
            if (spec.family() != RevivalFamily::Triple && spec.family() != RevivalFamily::EndPair) {
                throw InvalidTarget("triple designer needs support within sites 1, N-1 and N");
            }
            results = design_triple(a[0], a[n - 2], a[n - 1], s);
        } else if (kind == "last-k") {
            results = design_last_k(a, s);
        } else if (kind == "small-r") {
            RevivalSpec spec(s, a);
            int r = spec.first_support_after_one();
            for (int k = r; k < n - 1; k++) {
                if (a[k] != 0) {
                    throw InvalidTarget("small-r designer needs support on sites 1, r and N only");
                }
            }
            results = design_small_r(a[0], a[r - 1], a[n - 1], r, s);
        } else {
            TargetState t(a, 1, cfg.t0);
            SolverConfig sc;
            sc.max_iterations = cfg.max_iterations;
            sc.residual_tol = cfg.residual_tol;
            sc.parity = args.parity;
            sc.spectrum = s;
            Vec start;
            if (args.start == "geometric" && !args.parity) {
                try {
                    start = initial_guess(n, a[0]);
                } catch (const RootNotBracketed &e) {
                    std::cerr << "note: " << e.what() << "; starting from uniform weights\n";
                    start = Vec::Constant(n, 1.0 / n);
                }
            } else if (args.start == "geometric") {
                // The parity solver builds its own start.
                start = Vec::Constant(n, 1.0 / n);
            } else if (args.start == "uniform") {
                start = Vec::Constant(n, 1.0 / n);
            } else {
                throw UsageError("--start must be geometric or uniform");
            }
            results.push_back(refine(t, start, sc));
        }
    }

    if (args.index < 0 || args.index >= static_cast<int>(results.size())) {
        throw UsageError("--index " + std::to_string(args.index) + " out of range; " + std::to_string(results.size()) + " solution(s)");
    }
    const DesignResult &chosen = results[args.index];
    json meta = {
        {"method", chosen.diagnostics.method},
        {"target", to_std(chosen.target.amplitudes)},
        {"input_site", chosen.target.input_site},
        {"fidelity", chosen.fidelity},
        {"spectrum", spectrum_json(*spectrum)},
    };
    write_chain_file(args.out, chosen.chain, chosen.target.t0, meta);

    json report = {{"chain_file", args.out}, {"chosen", args.index}, {"threshold", cfg.threshold}};
    report["solutions"] = json::array();
    for (const auto &r : results) {
        report["solutions"].push_back(design_summary(r));
    }
    std::string text = report.dump(2) + "\n";
    if (!args.report.empty()) {
        write_text(args.report, text);
    } else {
        std::cout << text;
    }
    if (chosen.fidelity < cfg.threshold) {
        std::cerr << "design fidelity " << format_double(chosen.fidelity) << " is below the threshold\n";
        return kExitNoConvergence;
    }
    return 0;
}

FieldPerturbation field_mode(const std::string &name) {
    if (name == "fallback") {
        return FieldPerturbation::MultiplicativeWithFallback;
    }
    if (name == "multiplicative") {
        return FieldPerturbation::Multiplicative;
    }
    if (name == "additive") {
        return FieldPerturbation::Additive;
    }
    throw UsageError("--fields must be fallback, multiplicative or additive");
}

ChainSpec reference_for(const ChainFile &file, const std::string &reference_path) {
    if (!reference_path.empty()) {
        return read_chain_file(reference_path).chain;
    }
    if (auto s = spectrum_from_meta(file.meta, file.t0)) {
        return pst_chain_from_spectrum(*s);
    }
    return christandl_chain(file.chain.size(), file.t0);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Design spin chains for state synthesis and fractional revivals"};
    app.require_subcommand(1);

    Settings cfg;
    try {
        cfg = load_settings();
    } catch (const FileError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoInput;
    }

    // Flags bind to the config-derived values, so anything given on the
    // command line wins.
    DesignArgs dargs;
    auto *design = app.add_subcommand("design", "Design a chain and write it as JSON");
    design->require_subcommand(1);
    std::string design_kind;
    const std::pair<const char *, const char *> kinds[] = {
        {"pst", "Perfect state transfer chain for a spectrum"},
        {"end-pair", "Amplitude split between site 1 and site N"},
        {"triple", "Amplitudes on sites N-2, N-1, N"},
        {"last-k", "Amplitudes on the last k sites"},
        {"small-r", "Amplitudes on site 1, site r and site N"},
        {"numeric", "Arbitrary target by Gauss-Newton on the spectral weights"},
    };
    for (const auto &[kind, help] : kinds) {
        auto *sub = design->add_subcommand(kind, help);
        sub->add_option("--n", dargs.n, "Chain length");
        sub->add_option("--spectrum", dargs.spectrum, "Comma-separated eigenvalues (default linear)");
        sub->add_option("--t0", cfg.t0, "Transfer time");
        sub->add_option("--out", dargs.out, "Chain file to write");
        sub->add_option("--report", dargs.report, "Report file (default stdout)");
        sub->add_option("--threshold", cfg.threshold, "Minimum fidelity for exit code 0");
        sub->add_option("--index", dargs.index, "Which solution to write (sorted by J_max)");
        if (std::string(kind) != "pst") {
            sub->add_option("--alpha", dargs.alpha, "Comma-separated target amplitudes");
            sub->add_flag("--normalize", dargs.normalize, "Rescale --alpha to unit norm");
        }
        if (std::string(kind) == "end-pair") {
            sub->add_option("--alpha1", dargs.alpha1, "Amplitude left on site 1");
        }
        if (std::string(kind) == "numeric" || std::string(kind) == "last-k") {
            sub->add_option("--target", dargs.target, "Named target: w-state or end");
        }
        if (std::string(kind) == "numeric") {
            sub->add_flag("--parity", dargs.parity, "Zero-field parity reduction");
            sub->add_option("--start", dargs.start, "geometric or uniform");
            sub->add_option("--max-iterations", cfg.max_iterations);
            sub->add_option("--residual-tol", cfg.residual_tol, "Target for 1 - fidelity");
        }
        sub->callback([&design_kind, kind] { design_kind = kind; });
    }

    std::string chain_path, reference_path, alpha, named, out;
    bool normalize = false;

    auto *simulate = app.add_subcommand("simulate", "Site probabilities over a time grid as CSV");
    int input_site = 0;
    double t_start = 0;
    std::optional<double> t_end;
    simulate->add_option("--chain", chain_path)->required();
    simulate->add_option("--input-site", input_site, "Excited site (default from the chain file, else 1)");
    simulate->add_option("--t-start", t_start);
    simulate->add_option("--t-end", t_end, "Default: the chain's t0");
    simulate->add_option("--steps", cfg.steps, "Grid points")->check(CLI::PositiveNumber);
    simulate->add_option("--out", out, "CSV file (default stdout)");

    auto *robust = app.add_subcommand("robustness", "Monte Carlo fidelity under random parameter shifts");
    std::string eps_text;
    robust->add_option("--chain", chain_path)->required();
    robust->add_option("--eps", eps_text, "Comma-separated perturbation fractions");
    robust->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    robust->add_option("--seed", cfg.seed);
    robust->add_option("--threads", cfg.threads, "0 = hardware concurrency");
    robust->add_option("--fields", cfg.field_mode, "fallback, multiplicative or additive");
    robust->add_flag("--shared-draw", cfg.shared_draw, "Field n reuses the draw of coupling n");
    robust->add_option("--alpha", alpha);
    robust->add_option("--target", named);
    robust->add_option("--out", out, "CSV file (default stdout)");

    auto *speed = app.add_subcommand("speed", "J_max t0, coupling product identity and lower bounds as JSON");
    speed->add_option("--chain", chain_path)->required();
    speed->add_option("--reference", reference_path, "PST reference chain (default from the chain's spectrum)");
    speed->add_option("--alpha", alpha);
    speed->add_option("--target", named);
    speed->add_option("--out", out);

    auto *extend = app.add_subcommand("extend", "Mirror a chain about its first site");
    extend->add_option("--chain", chain_path)->required();
    extend->add_option("--theta", cfg.theta, "Splitting angle");
    extend->add_option("--out", out)->required();

    auto *verify = app.add_subcommand("verify", "Fidelity of a chain file against its target");
    double verify_threshold = 0;
    bool have_verify_threshold = false;
    verify->add_option("--chain", chain_path)->required();
    verify->add_option("--reference", reference_path);
    verify->add_option("--alpha", alpha);
    verify->add_option("--target", named);
    verify->add_flag("--normalize", normalize);
    auto *vt = verify->add_option("--threshold", verify_threshold);
    verify->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    have_verify_threshold = vt->count() > 0;

    try {
        if (design->parsed()) {
            return run_design(design_kind, dargs, cfg);
        }

        ChainFile file = read_chain_file(chain_path);
        const int n = file.chain.size();

        if (simulate->parsed()) {
            int site = input_site > 0 ? input_site : file.meta.value("input_site", 1);
            double end = t_end.value_or(file.t0);
            Vec times(cfg.steps);
            for (int k = 0; k < cfg.steps; k++) {
                times[k] = cfg.steps == 1 ? t_start : t_start + (end - t_start) * k / (cfg.steps - 1);
            }
            std::ostringstream csv;
            write_simulation_csv(csv, file.chain, site, times);
            write_text(out, csv.str());
            return 0;
        }

        if (robust->parsed()) {
            ResolvedTarget t = target_for(file, alpha, named, false);
            TargetState target(t.amplitudes, t.input_site, file.t0);
            std::vector<double> grid = eps_text.empty() ? cfg.eps : parse_list(eps_text, "--eps");
            RobustnessOptions opts;
            opts.fields = field_mode(cfg.field_mode);
            opts.shared_draw = cfg.shared_draw;
            opts.threads = cfg.threads;
            auto reports = robustness_sweep(file.chain, target, grid, cfg.trials, cfg.seed, opts);
            std::ostringstream csv;
            csv << "eps,trials,mean_fidelity,best_fidelity,std_fidelity,seed\n";
            for (const auto &r : reports) {
                csv << format_double(r.perturbation_fraction) << "," << r.trials << "," << format_double(r.mean_fidelity) << ","
                    << format_double(r.best_fidelity) << "," << format_double(r.std_fidelity) << "," << r.rng_seed << "\n";
            }
            write_text(out, csv.str());
            return 0;
        }

        if (speed->parsed()) {
            ResolvedTarget t = target_for(file, alpha, named, false);
            TargetState target(t.amplitudes, t.input_site, file.t0);
            ChainSpec reference = reference_for(file, reference_path);
            SpeedReport r = speed_report(file.chain, target, reference);
            json j = {
                {"n", n},
                {"j_max", r.j_max},
                {"j_max_t0", r.j_max_t0},
                {"coupling_product", r.coupling_product},
                {"reference_product", r.reference_product},
                {"product_identity_error", r.product_identity_error},
                {"lower_bound_exact", std::isnan(r.lower_bound_exact) ? json(nullptr) : json(r.lower_bound_exact)},
                {"lower_bound_asymptotic", r.lower_bound_asymptotic},
            };
            try {
                j["gate_model_j_max_t0"] = gate_model_time(n, target);
            } catch (const UnsupportedTarget &) {
                j["gate_model_j_max_t0"] = nullptr;
            }
            write_text(out, j.dump(2) + "\n");
            return 0;
        }

        if (extend->parsed()) {
            ChainSpec ext = extend_from_middle(file.chain, cfg.theta);
            json meta = {{"method", "mirror-extension"}, {"theta", cfg.theta}, {"input_site", n}};
            if (file.meta.contains("target")) {
                Vec a = to_vec(file.meta["target"].get<std::vector<double>>());
                meta["target"] = to_std(predict_extended_target(a, cfg.theta, file.t0).amplitudes);
            }
            write_chain_file(out, ext, file.t0, meta);
            return 0;
        }

        // verify
        ResolvedTarget t = target_for(file, alpha, named, normalize);
        TargetState target(t.amplitudes, t.input_site, file.t0);
        EigenSystem es = eigensystem(file.chain, cfg.tolerances);
        Overlap ov = fidelity(es, target);
        json j = {
            {"fidelity", ov.fidelity},
            {"phase", ov.phase},
            {"eigenvalues", to_std(es.eigenvalues)},
            {"synthesis_spectrum", validate_synthesis_spectrum(es.eigenvalues, file.t0)},
        };
        if (!reference_path.empty() || file.meta.contains("spectrum")) {
            ChainSpec reference = reference_for(file, reference_path);
            BetaTable table = beta_table(file.chain, reference, cfg.tolerances);
            j["beta_residual"] = beta_residual(table, file.chain, reference);
            j["beta_bottom_row"] = to_std(table.bottom_row());
        }
        write_text(out, j.dump(2) + "\n");
        double threshold = have_verify_threshold ? verify_threshold : cfg.threshold;
        return ov.fidelity >= threshold ? 0 : kExitBelowThreshold;
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FileError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoInput;
    } catch (const ConvergenceFailure &e) {
        std::cerr << "error: " << e.what() << " (best residual " << format_double(e.residual) << " after "
                  << e.iterations << " iterations)\n";
        return kExitNoConvergence;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: malformed chain file metadata: " << e.what() << "\n";
        return kExitNoInput;
    }
}
