#pragma once

#include <json.hpp>

#include "linres/controllability.hpp"
#include "linres/encoding.hpp"
#include "linres/topology.hpp"

namespace linres {

// Reservoir JSON: {kind, n, rho, seed, input_seed, rescale_mode,
// W (row-major), w}. Doubles survive the round trip exactly (shortest
// round-trip formatting on write, exact parse on read).
nlohmann::json to_json(const Reservoir& r);
Reservoir reservoir_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EncodedInput& e);

// Report JSON carries everything analyze() computed, nullspace included.
nlohmann::json to_json(const ControllabilityReport& rep);

}  // namespace linres
