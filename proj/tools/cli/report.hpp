#pragma once

#include <string>

#include <json.hpp>

#include "threshold_lab/rational.hpp"
#include "threshold_lab/sets.hpp"

namespace threshold_lab::cli {

using Json = nlohmann::ordered_json;

Json set_json(SubsetMask s);
Json family_json(const SetFamily& family);

// Decimal strings that stay on the stated side of x.
std::string decimal_down(const Rational& x, int digits);
std::string decimal_up(const Rational& x, int digits);

// Nested objects become dotted column names, arrays of objects get index
// segments, and any other array is written as compact JSON in one cell.
std::string to_csv(const Json& report);

}  // namespace threshold_lab::cli
