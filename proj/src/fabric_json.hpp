// Copyright 2026 The bitrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Internal: JSON mapping of the fabric shared by the description and the
// ground-truth container.

#ifndef BITREV_SRC_FABRIC_JSON_HPP
#define BITREV_SRC_FABRIC_JSON_HPP

#include <json.hpp>

#include "bitrev/fabric.hpp"

namespace bitrev::detail {

inline constexpr const char* kFabricFormat = "bitrev-fabric";
inline constexpr const char* kGroundTruthFormat = "bitrev-ground-truth";
inline constexpr int kFabricVersion = 1;

nlohmann::ordered_json fabric_to_json(const Fabric& fabric, bool with_defaults);
Fabric fabric_from_json(const nlohmann::json& j, bool with_defaults);

}  // namespace bitrev::detail

#endif  // BITREV_SRC_FABRIC_JSON_HPP
