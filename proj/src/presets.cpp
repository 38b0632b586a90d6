#include "iqv/presets.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iqv {

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = {
      {"a1xa1-swap",
       "A1 x A1, tau swaps the factors (c_{1,tau1} = 0)",
       CartanDatum("a1xa1-swap", {{2, 0}, {0, 2}}, {1, 1}, {1, 0})},
      {"a2-swap",
       "A2, tau swaps the nodes (c_{1,tau1} = -1)",
       CartanDatum("a2-swap", {{2, -1}, {-1, 2}}, {1, 1}, {1, 0})},
      {"a1aff-swap",
       "affine A1, tau swaps the nodes (c_{1,tau1} = -2)",
       CartanDatum("a1aff-swap", {{2, -2}, {-2, 2}}, {1, 1}, {1, 0})},
      {"a3-tau13",
       "A3, tau swaps the outer nodes and fixes the middle one",
       CartanDatum("a3-tau13", {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}},
                   {1, 1, 1}, {2, 1, 0})},
  };
  return catalog;
}

const CartanDatum* find_preset(std::string_view name) {
  for (const Preset& p : preset_catalog()) {
    if (p.name == name) return &p.datum;
  }
  return nullptr;
}

CartanDatum cartan_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("cartan file is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("cartan file must be a JSON object");
  for (const char* field : {"cartan", "symmetrizer", "tau"}) {
    if (!j.contains(field))
      throw std::invalid_argument(std::string("cartan file missing field '") +
                                  field + "'");
  }

  std::string name = j.value("name", std::string());

  std::vector<std::vector<long>> cartan;
  if (!j["cartan"].is_array())
    throw std::invalid_argument("field 'cartan' must be a matrix");
  for (const auto& row : j["cartan"]) {
    if (!row.is_array())
      throw std::invalid_argument("field 'cartan' must be a matrix");
    std::vector<long> r;
    for (const auto& entry : row) {
      if (!entry.is_number_integer())
        throw std::invalid_argument("cartan entries must be integers");
      r.push_back(entry.get<long>());
    }
    cartan.push_back(std::move(r));
  }

  std::vector<long> eps;
  if (!j["symmetrizer"].is_array())
    throw std::invalid_argument("field 'symmetrizer' must be an integer list");
  for (const auto& entry : j["symmetrizer"]) {
    if (!entry.is_number_integer())
      throw std::invalid_argument("symmetrizer entries must be integers");
    eps.push_back(entry.get<long>());
  }

  std::vector<std::size_t> tau;
  if (!j["tau"].is_array())
    throw std::invalid_argument("field 'tau' must be a 1-indexed permutation list");
  for (const auto& entry : j["tau"]) {
    if (!entry.is_number_integer() || entry.get<long>() < 1)
      throw std::invalid_argument("tau entries must be 1-indexed positive integers");
    tau.push_back(static_cast<std::size_t>(entry.get<long>() - 1));
  }

  return CartanDatum(std::move(name), std::move(cartan), std::move(eps),
                     std::move(tau));
}

CartanDatum load_cartan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read cartan file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return cartan_from_json(buf.str());
}

CartanDatum resolve_datum(const std::string& spec) {
  if (const CartanDatum* p = find_preset(spec)) return *p;
  return load_cartan_file(spec);
}

}  // namespace iqv
