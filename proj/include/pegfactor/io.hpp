// Copyright 2026 The pegfactor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pegfactor/analysis.hpp"
#include "pegfactor/ising.hpp"
#include "pegfactor/multiplier.hpp"
#include "pegfactor/sampler.hpp"
#include "pegfactor/strategy.hpp"
#include "pegfactor/topology.hpp"

namespace pegfactor {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "pegfactor 0.1.0";

json to_json(const IsingModel& m);
IsingModel model_from_json(const json& j);
json to_json(const VarMap& v);
VarMap varmap_from_json(const json& j);

json to_json(const Topology& t);
Topology topology_from_json(const json& j);

// Spins packed one bit per variable (1 = +1), low bit first, as hex.
std::string pack_spins(const std::vector<signed char>& z);
std::vector<signed char> unpack_spins(const std::string& hex, size_t n);

json to_json(const AnnealSchedule& s);
AnnealSchedule schedule_from_json(const json& j);
json to_json(const SampleSet& s);
SampleSet sampleset_from_json(const json& j);

json to_json(const PreparedProblem& p);
PreparedProblem prepared_from_json(const json& j);

json to_json(const IrvTrace& t);
json to_json(const FtrOutcome& o);
json to_json(const ExcitationMap& e);
json to_json(const std::vector<ChainStat>& c);

std::string read_file(const std::string& path);
// Writes UTF-8 with a trailing newline; "-" means stdout.
void write_file(const std::string& path, const std::string& text);
inline std::string dump(const json& j) { return j.dump(1) + "\n"; }

}  // namespace pegfactor
