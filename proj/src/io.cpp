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

#include "chainsmith/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <vector>

#include "chainsmith/spectral.hpp"

namespace chainsmith {

namespace {

Vec vec_from(const nlohmann::json &arr, const char *name) {
    if (!arr.is_array()) {
        throw FileError(std::string("\"") + name + "\" must be an array");
    }
    Vec v(static_cast<Eigen::Index>(arr.size()));
    for (size_t i = 0; i < arr.size(); i++) {
        if (!arr[i].is_number()) {
            throw FileError(std::string("\"") + name + "\" holds a non-number");
        }
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

}  // namespace

nlohmann::json chain_to_json(const ChainSpec &chain, double t0, const nlohmann::json &meta) {
    nlohmann::json j;
    j["format"] = kChainFormatVersion;
    j["n"] = chain.size();
    j["fields"] = std::vector<double>(chain.fields().data(), chain.fields().data() + chain.size());
    j["couplings"] = std::vector<double>(chain.couplings().data(), chain.couplings().data() + chain.couplings().size());
    j["t0"] = t0;
    j["meta"] = meta;
    return j;
}

ChainFile chain_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw FileError("chain file must hold a JSON object");
    }
    for (const char *key : {"format", "n", "fields", "couplings"}) {
        if (!j.contains(key)) {
            throw FileError(std::string("chain file is missing \"") + key + "\"");
        }
    }
    if (!j["format"].is_number_integer() || j["format"].get<int>() != kChainFormatVersion) {
        throw FileError("unsupported chain file format");
    }
    Vec b = vec_from(j["fields"], "fields");
    Vec c = vec_from(j["couplings"], "couplings");
    if (!j["n"].is_number_integer() || j["n"].get<long>() != b.size()) {
        throw FileError("\"n\" does not match the number of fields");
    }
    double t0 = kHalfPi;
    if (j.contains("t0")) {
        if (!j["t0"].is_number()) {
            throw FileError("\"t0\" must be a number");
        }
        t0 = j["t0"].get<double>();
    }
    try {
        return ChainFile{ChainSpec(b, c), t0, j.value("meta", nlohmann::json::object())};
    } catch (const InvalidChain &e) {
        throw FileError(std::string("invalid chain: ") + e.what());
    }
}

nlohmann::json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw FileError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw FileError("cannot parse " + path + ": " + e.what());
    }
}

void write_chain_file(const std::string &path, const ChainSpec &chain, double t0, const nlohmann::json &meta) {
    std::ofstream out(path);
    if (!out) {
        throw FileError("cannot write " + path);
    }
    out << chain_to_json(chain, t0, meta).dump(2) << "\n";
    if (!out) {
        throw FileError("failed writing " + path);
    }
}

ChainFile read_chain_file(const std::string &path) {
    return chain_from_json(read_json_file(path));
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_simulation_csv(std::ostream &out, const ChainSpec &chain, int input_site, const Vec &times) {
    const int n = chain.size();
    if (input_site < 1 || input_site > n) {
        throw InvalidTarget("input site outside the chain");
    }
    EigenSystem es = eigensystem(chain);
    out << "t";
    for (int k = 1; k <= n; k++) {
        out << ",site_" << k;
    }
    out << "\n";
    for (double t : times) {
        CVec psi = evolve_site(es, input_site, t);
        out << format_double(t);
        for (int k = 0; k < n; k++) {
            out << "," << format_double(std::norm(psi[k]));
        }
        out << "\n";
    }
}

Tolerances tolerances_from_json(const nlohmann::json &config, Tolerances tol) {
    if (!config.contains("tolerances")) {
        return tol;
    }
    const auto &t = config["tolerances"];
    auto take = [&](const char *key, double &slot) {
        if (t.contains(key)) {
            slot = t[key].get<double>();
        }
    };
    take("spectral_residual", tol.spectral_residual);
    take("spectrum_match", tol.spectrum_match);
    take("degeneracy_gap", tol.degeneracy_gap);
    take("lanczos_breakdown", tol.lanczos_breakdown);
    take("weight_floor", tol.weight_floor);
    return tol;
}

}  // namespace chainsmith
