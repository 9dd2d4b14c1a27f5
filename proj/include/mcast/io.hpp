#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "mcast/decomposition.hpp"
#include "mcast/instance.hpp"
#include "mcast/schedule.hpp"

namespace mcast {

using Json = nlohmann::json;

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// {n, edges [[u,v]...] sorted, trees [{id, root, parent {"child": parent}}]}
Json instance_to_json(const InstanceSpec& spec);
/// Throws ParseError on malformed input; the result is not validated.
InstanceSpec instance_from_json(const Json& j);

/// {length, sends [{round, from, to, msg}]} sorted by (round, from, to).
Json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const Json& j);

/// {paths [[nodes]...], levels [...]}
Json decomposition_to_json(const PathDecomposition& decomposition);

/// Compact dump with a trailing newline; keys come out sorted.
std::string dump(const Json& j);
Json parse_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace mcast
