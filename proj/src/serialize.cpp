#include "modfactor/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "modfactor/error.hpp"

namespace modfactor {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorKind::ParseError, "at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(path, std::string("missing field '") + key + "'");
  return *it;
}

const Json& array_at(const Json& j, const std::string& path, std::size_t expected_size) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  if (j.size() != expected_size) {
    parse_fail(path, "expected " + std::to_string(expected_size) + " entries, got " +
                         std::to_string(j.size()));
  }
  return j;
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) parse_fail(path, "non-finite number");
  return x;
}

int count_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) parse_fail(path, "expected an integer");
  return j.get<int>();
}

/// Runs a library constructor, converting its validation failures into
/// ParseErrors that carry the field path.
template <typename F>
auto guarded(const std::string& path, F&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    parse_fail(path, e.what());
  }
}

std::string sub(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

ComplexMatrix matrix_from_json(const Json& j, int rows, int cols, const std::string& path) {
  array_at(j, path, rows);
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rp = sub(path, r);
    array_at(j[r], rp, cols);
    for (int c = 0; c < cols; ++c) {
      const std::string cp = sub(rp, c);
      array_at(j[r][c], cp, 2);
      m(r, c) = Complex(number_at(j[r][c][0], sub(cp, 0)), number_at(j[r][c][1], sub(cp, 1)));
    }
  }
  return m;
}

ElementMatrix element_matrix_from_json(const Json& j, int rows, int cols, const AlgebraSpec& spec,
                                       const std::string& path) {
  array_at(j, path, rows);
  std::vector<AlgebraElement> data;
  for (int r = 0; r < rows; ++r) {
    array_at(j[r], sub(path, r), cols);
    for (int c = 0; c < cols; ++c) {
      data.push_back(element_from_json(j[r][c], spec, sub(sub(path, r), c)));
    }
  }
  return {rows, cols, spec, std::move(data)};
}

Json element_matrix_to_json(const ElementMatrix& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Json to_json(const AlgebraSpec& spec) {
  return Json{{"blocks", spec.block_dims()}};
}

Json to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const AlgebraElement& a) {
  Json out = Json::array();
  for (const auto& b : a.blocks()) out.push_back(to_json(b));
  return out;
}

Json to_json(const PresentedModule& m) {
  return Json{{"algebra", to_json(m.algebra())},
              {"k", m.generators()},
              {"gram", element_matrix_to_json(m.gram())}};
}

Json to_json(const ModuleElement& u) {
  Json out = Json::array();
  for (const auto& c : u.coeffs) out.push_back(to_json(c));
  return out;
}

Json to_json(const Correspondence& c) {
  Json out = to_json(c.module());
  out["left_algebra"] = to_json(c.left_algebra());
  Json action = Json::array();
  for (const auto& a : c.action()) action.push_back(element_matrix_to_json(a));
  out["action"] = std::move(action);
  return out;
}

Json to_json(const LinearMap& phi) {
  Json values = Json::array();
  for (const auto& v : phi.values()) values.push_back(to_json(v));
  return Json{{"domain", to_json(phi.domain())},
              {"codomain", to_json(phi.codomain())},
              {"values", std::move(values)}};
}

Json to_json(const ModuleMap& t) {
  Json values = Json::array();
  for (int p = 0; p < t.domain().free_dim(); ++p) values.push_back(to_json(t.value(p)));
  return Json{{"domain", to_json(t.domain())},
              {"codomain", to_json(t.codomain())},
              {"values", std::move(values)}};
}

std::string_view kind_name(const InstanceFile& file) {
  switch (file.payload.index()) {
    case 0: return "cp_map_problem";
    case 1: return "phi_map_problem";
    default: return "factorization_bundle";
  }
}

Json to_json(const InstanceFile& file) {
  Json out{{"version", file.version}, {"kind", std::string(kind_name(file))}};
  if (const auto* cp = std::get_if<CpMapProblem>(&file.payload)) {
    out["map"] = to_json(cp->map);
  } else if (const auto* pm = std::get_if<PhiMapProblem>(&file.payload)) {
    out["T"] = to_json(pm->t);
    if (pm->phi) out["phi"] = to_json(*pm->phi);
  } else {
    const auto& fb = std::get<FactorizationBundle>(file.payload);
    out["E"] = to_json(fb.e);
    out["correspondence"] = to_json(fb.corr);
    out["zeta"] = to_json(fb.zeta);
    out["v"] = to_json(fb.v);
  }
  return out;
}

AlgebraSpec spec_from_json(const Json& j, const std::string& path) {
  const Json& blocks = field(j, "blocks", path);
  if (!blocks.is_array()) parse_fail(sub(path, "blocks"), "expected an array");
  std::vector<int> dims;
  for (std::size_t i = 0; i < blocks.size(); ++i) dims.push_back(count_at(blocks[i], sub(sub(path, "blocks"), i)));
  return guarded(path, [&] { return AlgebraSpec(dims); });
}

AlgebraElement element_from_json(const Json& j, const AlgebraSpec& spec, const std::string& path) {
  array_at(j, path, spec.num_blocks());
  std::vector<ComplexMatrix> blocks;
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_dim(s);
    blocks.push_back(matrix_from_json(j[s], n, n, sub(path, s)));
  }
  return {spec, std::move(blocks)};
}

PresentedModule module_from_json(const Json& j, const std::string& path) {
  const AlgebraSpec spec = spec_from_json(field(j, "algebra", path), sub(path, "algebra"));
  const int k = count_at(field(j, "k", path), sub(path, "k"));
  if (k < 0) parse_fail(sub(path, "k"), "generator count must be >= 0");
  ElementMatrix gram = element_matrix_from_json(field(j, "gram", path), k, k, spec, sub(path, "gram"));
  return guarded(sub(path, "gram"), [&] { return PresentedModule(spec, std::move(gram)); });
}

ModuleElement module_element_from_json(const Json& j, const PresentedModule& m,
                                       const std::string& path) {
  array_at(j, path, m.generators());
  ModuleElement u;
  for (int i = 0; i < m.generators(); ++i) u.coeffs.push_back(element_from_json(j[i], m.algebra(), sub(path, i)));
  return u;
}

Correspondence correspondence_from_json(const Json& j, const std::string& path) {
  PresentedModule module = module_from_json(j, path);
  const AlgebraSpec left = spec_from_json(field(j, "left_algebra", path), sub(path, "left_algebra"));
  const std::string ap = sub(path, "action");
  const Json& action_json = array_at(field(j, "action", path), ap, left.dim());
  std::vector<ElementMatrix> action;
  for (int a = 0; a < left.dim(); ++a) {
    action.push_back(element_matrix_from_json(action_json[a], module.generators(), module.generators(),
                                              module.algebra(), sub(ap, a)));
  }
  return guarded(path, [&] { return Correspondence(module, left, action); });
}

LinearMap linear_map_from_json(const Json& j, const std::string& path) {
  const AlgebraSpec dom = spec_from_json(field(j, "domain", path), sub(path, "domain"));
  const AlgebraSpec cod = spec_from_json(field(j, "codomain", path), sub(path, "codomain"));
  const std::string vp = sub(path, "values");
  const Json& values_json = array_at(field(j, "values", path), vp, dom.dim());
  std::vector<AlgebraElement> values;
  for (int a = 0; a < dom.dim(); ++a) values.push_back(element_from_json(values_json[a], cod, sub(vp, a)));
  return {dom, cod, std::move(values)};
}

ModuleMap module_map_from_json(const Json& j, const std::string& path) {
  PresentedModule dom = module_from_json(field(j, "domain", path), sub(path, "domain"));
  PresentedModule cod = module_from_json(field(j, "codomain", path), sub(path, "codomain"));
  const std::string vp = sub(path, "values");
  const Json& values_json = array_at(field(j, "values", path), vp, dom.free_dim());
  std::vector<ModuleElement> values;
  for (int p = 0; p < dom.free_dim(); ++p) values.push_back(module_element_from_json(values_json[p], cod, sub(vp, p)));
  return guarded(path, [&] { return ModuleMap(dom, cod, values); });
}

InstanceFile instance_from_json(const Json& j) {
  const Json& version = field(j, "version", "");
  if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
    parse_fail("/version", "unsupported format version (expected \"" + std::string(kFormatVersion) + "\")");
  }
  const Json& kind = field(j, "kind", "");
  if (!kind.is_string()) parse_fail("/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  InstanceFile out;
  if (k == "cp_map_problem") {
    out.payload = CpMapProblem{linear_map_from_json(field(j, "map", ""), "/map")};
  } else if (k == "phi_map_problem") {
    PhiMapProblem pm{module_map_from_json(field(j, "T", ""), "/T"), std::nullopt};
    if (j.contains("phi")) pm.phi = linear_map_from_json(j["phi"], "/phi");
    out.payload = std::move(pm);
  } else if (k == "factorization_bundle") {
    FactorizationBundle fb{module_from_json(field(j, "E", ""), "/E"),
                           correspondence_from_json(field(j, "correspondence", ""), "/correspondence"),
                           {},
                           module_map_from_json(field(j, "v", ""), "/v")};
    fb.zeta = module_element_from_json(field(j, "zeta", ""), fb.corr.module(), "/zeta");
    out.payload = std::move(fb);
  } else {
    parse_fail("/kind", "unknown kind '" + k + "'");
  }
  return out;
}

namespace {

bool has_object(const Json& j) {
  if (j.is_object()) return true;
  if (!j.is_array()) return false;
  for (const auto& x : j) {
    if (has_object(x)) return true;
  }
  return false;
}

void format_into(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth) + 1, ' ');
  const std::string close(static_cast<std::size_t>(depth), ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t n = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++n) {
      out += pad + Json(it.key()).dump() + ": ";
      format_into(it.value(), depth + 1, out);
      out += n + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "}";
  } else if (j.is_array() && has_object(j)) {
    out += "[\n";
    for (std::size_t n = 0; n < j.size(); ++n) {
      out += pad;
      format_into(j[n], depth + 1, out);
      out += n + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string format_json(const Json& j) {
  std::string out;
  format_into(j, 0, out);
  return out + "\n";
}

std::string serialize(const InstanceFile& file) { return format_json(to_json(file)); }

InstanceFile deserialize(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Locate the byte offset as line/column.
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                    ": malformed JSON");
  }
  return instance_from_json(j);
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return deserialize(ss.str());
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

}  // namespace modfactor
