#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "modfactor/factor.hpp"

namespace modfactor {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "1";

struct CpMapProblem {
  LinearMap map;
};

struct PhiMapProblem {
  ModuleMap t;
  std::optional<LinearMap> phi;  // absent for infer-phi inputs
};

struct FactorizationBundle {
  PresentedModule e;
  Correspondence corr;
  ModuleElement zeta;
  ModuleMap v;
};

struct InstanceFile {
  std::string version{kFormatVersion};
  std::variant<CpMapProblem, PhiMapProblem, FactorizationBundle> payload;
};

std::string_view kind_name(const InstanceFile& file);

Json to_json(const AlgebraSpec& spec);
Json to_json(const AlgebraElement& a);
Json to_json(const ComplexMatrix& m);
Json to_json(const PresentedModule& m);
Json to_json(const ModuleElement& u);
Json to_json(const Correspondence& c);
Json to_json(const LinearMap& phi);
Json to_json(const ModuleMap& t);
Json to_json(const InstanceFile& file);

// Readers throw ParseError naming the JSON pointer of the offending field.
AlgebraSpec spec_from_json(const Json& j, const std::string& path = "");
AlgebraElement element_from_json(const Json& j, const AlgebraSpec& spec, const std::string& path = "");
PresentedModule module_from_json(const Json& j, const std::string& path = "");
ModuleElement module_element_from_json(const Json& j, const PresentedModule& m,
                                       const std::string& path = "");
Correspondence correspondence_from_json(const Json& j, const std::string& path = "");
LinearMap linear_map_from_json(const Json& j, const std::string& path = "");
ModuleMap module_map_from_json(const Json& j, const std::string& path = "");
InstanceFile instance_from_json(const Json& j);

/// Indented JSON with numeric arrays kept on one line; ends with a newline.
std::string format_json(const Json& j);

/// Doubles use the shortest round-trip decimal form, so parsing the output
/// reproduces every value bit for bit.
std::string serialize(const InstanceFile& file);
/// Syntax errors report line and column.
InstanceFile deserialize(std::string_view text);

InstanceFile read_instance_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace modfactor
