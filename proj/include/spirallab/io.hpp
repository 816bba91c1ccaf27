#pragma once

// JSON function, generator and polynomial specs; complex numbers are [re, im].

#include <string>

#include "json.hpp"

#include "spirallab/extensions.hpp"
#include "spirallab/semigroups.hpp"
#include "spirallab/univalent.hpp"

namespace spirallab {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Complex complex_from_json(const Json& j);
Json to_json(const CVec& v);
Json to_json(const BallPoint& p);

/// {"family":"koebe"} | {"family":"mobius_spiral","c":[re,im]} |
/// {"family":"spiral_koebe","theta":t} | {"family":"rational","num":[...],"den":[...]} |
/// {"family":"identity"} | {"family":"half_plane"} |
/// {"family":"koenigs","generator":{...}}; optional "mu":[re,im].
UnivalentMap function_from_json(const Json& j);
Json function_to_json(const UnivalentMap& h);

/// {"family":"identity"|"logistic"|"hyperbolic_square"} |
/// {"family":"polynomial","coeffs":[[re,im],...],"kind":"dilation"|"hyperbolic",
///  "tau":[re,im],"mu":[re,im]}.
Generator generator_from_json(const Json& j);
Json generator_to_json(const Generator& g);

/// {"degree":r,"terms":[{"exps":[e1,...,em],"coef":[re,im]}]}; optional "dims".
HomogeneousPolynomial polynomial_from_json(const Json& j, int default_dims = 1);
Json polynomial_to_json(const HomogeneousPolynomial& q);

/// A CLI spec argument: a path to a JSON file, inline JSON, or a bare family
/// name (shorthand for {"family": name}).
Json load_spec_argument(const std::string& arg);

/// Parses "re,im" or "re".
Complex parse_complex(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace spirallab
