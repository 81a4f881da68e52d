#ifndef CAUSENT_JSON_IO_HPP
#define CAUSENT_JSON_IO_HPP

#include "causent/constraint_gen.hpp"
#include "causent/entropy_space.hpp"
#include "causent/polyhedron.hpp"

#include <json.hpp>

#include <string>

namespace causent {

using Json = nlohmann::ordered_json;

// ConstraintSystem JSON: coordinates as comma-joined labels, rows as integer
// strings ("expression >= 0" sign convention), provenance per row with the
// equalities listed first.
Json to_json(const ConstraintSystem& cs);
Json to_json(const HCone& c);
HCone hcone_from_json(const Json& j);
ConstraintSystem constraint_system_from_json(const Json& j);

Json to_json(const RaySet& r);
RaySet rayset_from_json(const Json& j);

Json to_json(const JointDistribution& p);
JointDistribution distribution_from_json(const Json& j);

// {"coordinates": [...], "values": ["3/2", ...]} with rational strings.
struct NamedVector {
    std::vector<std::string> coords;
    Row values;
};
NamedVector vector_from_json(const Json& j);

std::string sha256_hex(const std::string& data);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace causent

#endif
