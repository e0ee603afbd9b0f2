#pragma once
#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "onlat/loop.hpp"
#include "onlat/representations.hpp"
#include "onlat/spin.hpp"
#include "onlat/torus.hpp"

namespace onlat {

// Snapshots carry "schema": "v1" and a "model" tag.
inline constexpr const char* kSnapshotSchema = "v1";

nlohmann::json spin_snapshot(const SpinConfig& cfg, const Torus& t, double beta);
// throws std::invalid_argument on schema/model/shape mismatch
SpinConfig spin_from_snapshot(const nlohmann::json& j, int* d = nullptr, int* L = nullptr);

// edges as pairs of hexagons [[a,b],[a,b]]; domain is the spec string used to build it
nlohmann::json loop_snapshot(const LoopConfig& w, const std::string& domain, double n, double x);
LoopConfig loop_from_snapshot(const nlohmann::json& j, const HexDomain& d);

nlohmann::json hardhex_snapshot(const HardHexagon& h, double lambda);
std::vector<std::array<int, 2>> hardhex_from_snapshot(const nlohmann::json& j);

}  // namespace onlat
