#ifndef MVCF_JSONIO_HPP
#define MVCF_JSONIO_HPP

#include <json.hpp>
#include <string>

namespace mvcf {

using Json = nlohmann::ordered_json;

/// Render a double with 17 significant digits (round-trip exact).
std::string fmt17(double v);

/// Serializer that fixes the float format to 17 significant digits so that a
/// given document always produces byte-identical output.
std::string dump_json17(const Json& j, int indent = 2);

/// Write-then-rename so readers never observe a half-written file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace mvcf

#endif
