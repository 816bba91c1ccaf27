#include "spirallab/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace spirallab {

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorCode::invalid_spec, "complex numbers are serialized as [re, im]: " + j.dump());
}

Json to_json(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

Json to_json(const BallPoint& p) { return Json{{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

namespace {

std::vector<Complex> complex_list(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::invalid_spec, std::string(what) + " must be an array");
  std::vector<Complex> out;
  for (const auto& c : j) out.push_back(complex_from_json(c));
  return out;
}

std::string family_of(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw Error(ErrorCode::invalid_spec, "spec needs a string \"family\" field");
  }
  return j["family"].get<std::string>();
}

}  // namespace

UnivalentMap function_from_json(const Json& j) {
  const std::string family = family_of(j);
  UnivalentMap h = UnivalentMap::identity();
  if (family == "identity") {
    h = UnivalentMap::identity();
  } else if (family == "koebe") {
    h = UnivalentMap::koebe();
  } else if (family == "mobius_spiral") {
    if (!j.contains("c")) throw Error(ErrorCode::invalid_spec, "mobius_spiral needs \"c\"");
    h = UnivalentMap::mobius_spiral(complex_from_json(j["c"]));
  } else if (family == "spiral_koebe") {
    if (!j.contains("theta") || !j["theta"].is_number()) {
      throw Error(ErrorCode::invalid_spec, "spiral_koebe needs numeric \"theta\"");
    }
    h = UnivalentMap::spiral_koebe(j["theta"].get<double>());
  } else if (family == "half_plane") {
    h = UnivalentMap::half_plane();
  } else if (family == "rational") {
    if (!j.contains("num") || !j.contains("den")) {
      throw Error(ErrorCode::invalid_spec, "rational needs \"num\" and \"den\"");
    }
    h = UnivalentMap::rational(complex_list(j["num"], "num"), complex_list(j["den"], "den"));
  } else if (family == "koenigs") {
    if (!j.contains("generator")) throw Error(ErrorCode::invalid_spec, "koenigs needs \"generator\"");
    h = koenigs(generator_from_json(j["generator"]));
  } else {
    throw Error(ErrorCode::invalid_spec, "unknown function family \"" + family + "\"");
  }
  if (j.contains("mu")) h = h.with_spiral_multiplier(complex_from_json(j["mu"]));
  return h;
}

Json function_to_json(const UnivalentMap& h) {
  Json j;
  j["family"] = h.family() == Family::custom ? h.name() : std::string(to_string(h.family()));
  switch (h.family()) {
    case Family::mobius_spiral: j["c"] = to_json(h.mobius_c()); break;
    case Family::spiral_koebe: j["theta"] = h.spiral_theta(); break;
    case Family::rational: {
      Json num = Json::array(), den = Json::array();
      for (auto c : h.numerator()) num.push_back(to_json(c));
      for (auto c : h.denominator()) den.push_back(to_json(c));
      j["num"] = num;
      j["den"] = den;
      break;
    }
    default: break;
  }
  if (auto mu = h.spiral_multiplier()) j["mu"] = to_json(*mu);
  return j;
}

Generator generator_from_json(const Json& j) {
  const std::string family = family_of(j);
  if (family == "identity") return identity_generator();
  if (family == "logistic") return logistic_generator();
  if (family == "hyperbolic_square") return hyperbolic_square_generator();
  if (family != "polynomial") throw Error(ErrorCode::invalid_spec, "unknown generator family \"" + family + "\"");
  if (!j.contains("coeffs")) throw Error(ErrorCode::invalid_spec, "polynomial generator needs \"coeffs\"");
  auto coeffs = complex_list(j["coeffs"], "coeffs");
  GeneratorKind kind = GeneratorKind::dilation;
  if (j.contains("kind")) {
    const auto k = j["kind"].get<std::string>();
    if (k == "hyperbolic") {
      kind = GeneratorKind::hyperbolic;
    } else if (k != "dilation") {
      throw Error(ErrorCode::invalid_spec, "generator kind must be dilation or hyperbolic");
    }
  }
  Complex tau = j.contains("tau") ? complex_from_json(j["tau"]) : Complex{};
  Complex mu;
  if (j.contains("mu")) {
    mu = complex_from_json(j["mu"]);
  } else if (kind == GeneratorKind::dilation) {
    Generator probe = Generator::polynomial(coeffs, kind, tau, 1.0);
    mu = probe.df(tau);
  } else {
    throw Error(ErrorCode::invalid_spec, "hyperbolic generator needs \"mu\" (angular derivative)");
  }
  if (kind == GeneratorKind::hyperbolic && !j.contains("tau")) {
    throw Error(ErrorCode::invalid_spec, "hyperbolic generator needs \"tau\" on the unit circle");
  }
  std::string name = j.value("name", std::string("polynomial"));
  return Generator::polynomial(std::move(coeffs), kind, tau, mu, std::move(name));
}

Json generator_to_json(const Generator& g) {
  Json j;
  j["family"] = g.coefficients.empty() ? g.name : std::string("polynomial");
  j["name"] = g.name;
  if (!g.coefficients.empty()) {
    Json c = Json::array();
    for (auto v : g.coefficients) c.push_back(to_json(v));
    j["coeffs"] = c;
  }
  j["kind"] = std::string(to_string(g.kind));
  j["tau"] = to_json(g.tau);
  j["mu"] = to_json(g.mu);
  return j;
}

HomogeneousPolynomial polynomial_from_json(const Json& j, int default_dims) {
  if (j.is_string() && j.get<std::string>() == "zero") return HomogeneousPolynomial::zero(1, default_dims);
  if (!j.is_object() || !j.contains("degree") || !j["degree"].is_number_integer()) {
    throw Error(ErrorCode::invalid_spec, "polynomial needs an integer \"degree\"");
  }
  const int degree = j["degree"].get<int>();
  std::vector<HomogeneousPolynomial::Term> terms;
  int dims = j.contains("dims") ? j["dims"].get<int>() : 0;
  if (j.contains("terms")) {
    for (const auto& t : j["terms"]) {
      if (!t.contains("exps") || !t.contains("coef")) {
        throw Error(ErrorCode::invalid_spec, "each term needs \"exps\" and \"coef\"");
      }
      auto exps = t["exps"].get<std::vector<int>>();
      if (dims == 0) dims = static_cast<int>(exps.size());
      terms.push_back({std::move(exps), complex_from_json(t["coef"])});
    }
  }
  if (dims == 0) dims = default_dims;
  return {degree, dims, std::move(terms)};
}

Json polynomial_to_json(const HomogeneousPolynomial& q) {
  Json terms = Json::array();
  for (const auto& t : q.terms()) terms.push_back(Json{{"exps", t.exponents}, {"coef", to_json(t.coefficient)}});
  return Json{{"degree", q.degree()}, {"dims", q.dims()}, {"terms", terms}};
}

Json load_spec_argument(const std::string& arg) {
  if (arg.empty()) throw Error(ErrorCode::invalid_spec, "empty spec argument");
  try {
    if (arg.front() == '{' || arg.front() == '[' || arg.front() == '"') return Json::parse(arg);
    if (std::filesystem::exists(arg)) {
      std::ifstream in(arg);
      return Json::parse(in);
    }
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_spec, std::string("malformed spec JSON: ") + e.what());
  }
  if (arg == "zero") return Json("zero");
  return Json{{"family", arg}};
}

Complex parse_complex(const std::string& text) {
  const auto values = parse_list(text);
  if (values.size() == 1) return {values[0], 0.0};
  if (values.size() == 2) return {values[0], values[1]};
  throw Error(ErrorCode::invalid_spec, "expected re,im but got \"" + text + "\"");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_spec, "not a number: \"" + item + "\"");
    }
  }
  if (out.empty()) throw Error(ErrorCode::invalid_spec, "empty numeric list");
  return out;
}

}  // namespace spirallab
