#include "nlslab/field_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nlslab/errors.hpp"

namespace nlslab {

using nlohmann::json;

std::string field_to_json(const Field& u) {
  json re = json::array(), im = json::array();
  for (cplx c : u.coeffs()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  json j = {{"L", u.grid().L}, {"n", u.n()}, {"re", re}, {"im", im}};
  return j.dump();
}

Field field_from_json(std::string_view text, int n_phys) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("field json: ") + e.what());
  }
  for (const char* key : {"L", "n", "re", "im"})
    if (!j.contains(key)) throw InvalidArgument(std::string("field json: missing key ") + key);
  const auto grid = SpectralGrid::make(j["L"].get<double>(), j["n"].get<int>(), n_phys);
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != grid.size() ||
      static_cast<int>(im.size()) != grid.size())
    throw InvalidArgument("field json: re/im must hold 2n+1 numbers");
  std::vector<cplx> c(static_cast<std::size_t>(grid.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {re[i].get<double>(), im[i].get<double>()};
  return Field(grid, std::move(c));
}

void write_field_json(const std::string& path, const Field& u) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << field_to_json(u) << '\n';
}

Field read_field_json(const std::string& path, int n_phys) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return field_from_json(ss.str(), n_phys);
}

}  // namespace nlslab
