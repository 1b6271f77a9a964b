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

#ifndef CHAINSMITH_IO_HPP
#define CHAINSMITH_IO_HPP

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "chainsmith/chain.hpp"
#include "chainsmith/errors.hpp"

namespace chainsmith {

class FileError : public Error {
   public:
    using Error::Error;
};

inline constexpr int kChainFormatVersion = 1;

struct ChainFile {
    ChainSpec chain;
    double t0;
    nlohmann::json meta;
};

/// {"format": 1, "n": N, "fields": [...], "couplings": [...], "t0": t0, "meta": {...}}
nlohmann::json chain_to_json(const ChainSpec &chain, double t0, const nlohmann::json &meta = nlohmann::json::object());
ChainFile chain_from_json(const nlohmann::json &j);

void write_chain_file(const std::string &path, const ChainSpec &chain, double t0, const nlohmann::json &meta = nlohmann::json::object());
ChainFile read_chain_file(const std::string &path);

nlohmann::json read_json_file(const std::string &path);

/// Shortest decimal that round-trips, always with '.' as separator.
std::string format_double(double x);

/// Site probabilities |<n|e^{-iHt}|input>|^2 on the given times.
/// Header "t,site_1,...,site_N".
void write_simulation_csv(std::ostream &out, const ChainSpec &chain, int input_site, const Vec &times);

/// Applies the "tolerances" object of a config file on top of `tol`.
Tolerances tolerances_from_json(const nlohmann::json &config, Tolerances tol = {});

}  // namespace chainsmith

#endif
