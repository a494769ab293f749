// Copyright 2026 The bmolab Authors
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

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bmolab/carleson.hpp"
#include "bmolab/filtration.hpp"
#include "bmolab/norms.hpp"
#include "bmolab/process.hpp"
#include "bmolab/stopping.hpp"

namespace bmolab {

using Json = nlohmann::ordered_json;

// Documents:
//   tree/v1     {"schema","depth","root":{"mass","children":[...]}}
//   process/v1  {"schema","tree","dim","levels":[[...],...]}; levels[n] holds
//               the level-n atom values row-major (atom-major, dim-minor)
//   rv/v1       {"schema","tree","dim","leaves":[[...],...]}; one array of
//               dim numbers per leaf
//   tau/v1      {"schema","stops":[[level,index],...]}
//   measure/v1  {"schema","tree","densities":[[...],...]}; densities[k][leaf]
// "tree" is either an inline tree/v1 document or a path, resolved against
// `base` (the directory of the containing file). Loaders raise FormatError
// with a JSON pointer to the offending node.

Json tree_to_json(const FiltrationTree& tree);
TreePtr tree_from_json(const Json& doc);

Json process_to_json(const AdaptedProcess& process);
AdaptedProcess process_from_json(const Json& doc, const std::filesystem::path& base = {});

Json rv_to_json(const RandomVariable& x);
RandomVariable rv_from_json(const Json& doc, const std::filesystem::path& base = {});

Json tau_to_json(const StoppingTime& tau);
StoppingTime tau_from_json(const Json& doc, const TreePtr& tree);

Json measure_to_json(const CarlesonMeasure& mu);
CarlesonMeasure measure_from_json(const Json& doc, const std::filesystem::path& base = {});

Json witness_to_json(const Witness& witness);
Json norm_result_to_json(const NormResult& result);

// Parses a file; syntax errors become FormatError at "/".
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

}  // namespace bmolab
