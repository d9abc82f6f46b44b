#pragma once

// JSON file formats for structures, correlations, systems and sampled spaces.

#include <nlohmann/json.hpp>
#include <string>

#include "aiso/distsys.hpp"
#include "aiso/embound.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

using Json = nlohmann::ordered_json;

// Unreadable files and malformed documents.
class IoError : public InputError {
 public:
  using InputError::InputError;
};

Json read_json(const std::string& path);

// Shape problems inside well-formed JSON are left for validate_structure.
MetricStructure structure_from_json(const Json& j);
Json structure_to_json(const MetricStructure& s);
MetricStructure load_structure(const std::string& path);

// {"relation": {sort: 0/1 matrix}, "anchors": [[sort, left, right], ...]};
// points may be given by label or index.
Correlation correlation_from_json(const Json& j, StructurePtr left, StructurePtr right);
Json correlation_to_json(const Correlation& c);

// {"name", "builtin", "truncation", "generators": [DSL strings]}
DistortionSystem system_from_json(const Json& j, const Signature& sig);

// {"dim", "field", "norm", "weights"?, "samples", "radius_cap"}; complex
// entries are [re, im] pairs.
SampledBanach banach_from_json(const Json& j);
Mat matrix_from_json(const Json& j);

std::size_t resolve_point(const MetricStructure& s, std::size_t sort, const Json& p);
std::size_t resolve_sort(const MetricStructure& s, const Json& p);

}  // namespace aiso
