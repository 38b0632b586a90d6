#pragma once

#include "iqv/cartan.hpp"

#include <string>
#include <string_view>
#include <vector>

// Built-in Cartan data and the structured-text file format for user data.

namespace iqv {

struct Preset {
  std::string name;
  std::string summary;
  CartanDatum datum;
};

// The four built-in data. All validate; c_{1,tau 1} is 0, -1, -2, 0
// respectively (the last with a tau-fixed middle node).
const std::vector<Preset>& preset_catalog();

const CartanDatum* find_preset(std::string_view name);

// Parses the cartan-datum file format: a JSON object with fields
//   name (string, optional), cartan (n x n integer matrix),
//   symmetrizer (n positive integers), tau (1-indexed permutation list).
// Throws std::invalid_argument with a descriptive message on malformed
// input. The result is not validated; callers decide how to surface
// violations.
CartanDatum cartan_from_json(const std::string& text);

// Reads and parses a cartan-datum file; throws std::runtime_error when the
// file cannot be read, std::invalid_argument when it cannot be parsed.
CartanDatum load_cartan_file(const std::string& path);

// Resolves a --cartan argument: preset name first, then file path.
CartanDatum resolve_datum(const std::string& spec);

}  // namespace iqv
