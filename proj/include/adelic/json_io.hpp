#pragma once

#include "json.hpp"

#include "adelic/dynamics.hpp"

namespace adelic {

using Json = nlohmann::ordered_json;

/// Wire formats.  Field elements are strings ("a", "a/b", "a+b*w"); prime
/// sets are the textual expression grammar; exponents and valuations are
/// integers with "inf" (and "-inf" for interval bounds) as sentinels.
/// Parse failures throw UsageError naming the offending key.

Json exponent_json(const ExtInt& e);
ExtInt exponent_from_json(const Json& j, const std::string& key);

Json superideal_json(const SuperIdeal& a);
/// Accepts {"pieces": [...]}, the shorthands "unit" and "zero", and
/// {"element": "k"} for the divisor of k.
SuperIdeal superideal_from_json(const Json& j, const Field& F);

Json local_json(const LocalValue& v, const Field& F);
LocalValue local_from_json(const Json& j, const Field& F);

Json sketch_json(const AdeleSketch& r, const Field& F);
/// Accepts {"global": ..., "overrides": [...]} or a bare element string.
AdeleSketch sketch_from_json(const Json& j, const Field& F);

Json point_json(const OmegaPoint& w, const Field& F);
OmegaPoint point_from_json(const Json& j, const Field& F);

Json group_json(const GroupElement& g, const Field& F);
GroupElement group_from_json(const Json& j, const Field& F);

Json neighborhood_json(const BasicNeighborhood& V, const Field& F);
BasicNeighborhood neighborhood_from_json(const Json& j, const Field& F);

Json stabilizer_json(const StabilizerDescription& s, const Field& F);

Json interval_json(const ValInterval& iv);

Json open_json(const PowerCofiniteOpen& U);
PowerCofiniteOpen open_from_json(const Json& j, const Field& F);

}  // namespace adelic
