#pragma once

// JSON wire formats: the group-spec document, characteristic and element
// literals, endomorphism modules, verdicts and reports.  Rationals are
// serialized as strings so arbitrary precision survives the round trip;
// local basis entries are exponent -> rational maps in the class symbol.

#include "tfg/catalog.hpp"
#include "tfg/transit.hpp"

#include "json.hpp"

namespace tfg {

using Json = nlohmann::ordered_json;

Json registry_to_json(const Registry& reg);
std::shared_ptr<const Registry> registry_from_json(const Json& j);

Json characteristic_to_json(const Characteristic& chi);
Characteristic characteristic_from_json(const Json& j,
                                        const std::shared_ptr<const Registry>& reg);

Json group_to_json(const FRGroup& g);
GroupPtr group_from_json(const Json& j);

Json element_to_json(const Element& x);
Element element_from_json(const Json& j, const GroupPtr& g);

/// Inline element literals: "(1,2,3)", "(1/2,0,3)", "(1,0,0)/p@P2".
Element parse_element(const std::string& text, const GroupPtr& g);

Json endmodule_to_json(const EndModule& em);
Json verdict_to_json(const Verdict& v);
Json region_report_to_json(const RegionReport& r);

/// Stable digest of the inputs, for reports.
std::string digest(const std::vector<std::string>& parts);

/// Report envelope: command echo, digest, results, scope, seed, version.
Json make_report(const std::string& command, const std::vector<std::string>& inputs,
                 Json results, const std::string& scope, uint64_t seed);

inline const char* kVersion = "1.0.0";

}  // namespace tfg
