#include "cartan/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cartan/error.hpp"

namespace cartan::jsonio {

namespace {

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::Parse, msg); }

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(where) + ": missing \"" + key + "\"");
  return j.at(key);
}

double real_of(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + ": expected a number");
  return j.get<double>();
}

int int_of(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + ": expected an integer");
  return j.get<int>();
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    case Json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      // Short numeric rows stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        if (!flat) newline(depth + 1);
        dump_into(x, indent, depth + 1, out);
        first = false;
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump_into(it.value(), indent, depth + 1, out);
        first = false;
      }
      newline(depth);
      out += '}';
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

cplx parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad("expected a complex number as a real or [re, im]");
}

CVec parse_vector(const Json& j) {
  if (!j.is_array()) bad("expected a list of complex numbers");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
  return v;
}

CMat parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("expected a matrix as a list of rows");
  const std::size_t cols = j[0].size();
  CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const CVec row = parse_vector(j[r]);
    if (static_cast<std::size_t>(row.size()) != cols) bad("matrix rows have different lengths");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Domain parse_domain(const Json& j) {
  const Json& kind = field(j, "kind", "domain");
  if (!kind.is_string()) bad("domain: \"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "I") return Domain::type_one(int_of(field(j, "m", "domain I"), "m"), int_of(field(j, "n", "domain I"), "n"));
  if (k == "II") return Domain::type_two(int_of(field(j, "p", "domain II"), "p"));
  if (k == "III") return Domain::type_three(int_of(field(j, "q", "domain III"), "q"));
  if (k == "IV") return Domain::type_four(int_of(field(j, "N", "domain IV"), "N"));
  if (k == "Product") {
    const Json& fs = field(j, "factors", "domain Product");
    if (!fs.is_array()) bad("domain Product: \"factors\" must be a list");
    std::vector<Domain> factors;
    for (const auto& f : fs) factors.push_back(parse_domain(f));
    return Domain::product(factors);
  }
  bad("unknown domain kind \"" + k + "\"");
}

HoloMap parse_map(const Domain& d, const Json& j) {
  const Json& fam = field(j, "family", "map");
  if (!fam.is_string()) bad("map: \"family\" must be a string");
  const std::string f = fam.get<std::string>();
  static const Json kEmpty = Json::object();
  const Json& params = j.contains("params") ? j.at("params") : kEmpty;
  std::vector<Json> children;
  if (j.contains("children")) {
    if (!j.at("children").is_array()) bad("map: \"children\" must be a list");
    for (const auto& c : j.at("children")) children.push_back(c);
  }

  if (f == "identity") return HoloMap::identity(d);
  if (f == "constant") return HoloMap::constant(d, {parse_vector(field(params, "c", "constant"))});
  if (f == "scale") return HoloMap::scale(d, real_of(field(params, "c", "scale"), "scale c"));
  if (f == "disc_affine")
    return HoloMap::disc_affine(d, parse_complex(field(params, "a", "disc_affine")),
                                parse_complex(field(params, "b", "disc_affine")));
  if (f == "unitary_pair")
    return HoloMap::unitary_pair(d, parse_matrix(field(params, "P", "unitary_pair")),
                                 parse_matrix(field(params, "Q", "unitary_pair")));
  if (f == "mobius") {
    if (params.contains("point")) return HoloMap::mobius(d, {parse_vector(params.at("point"))});
    return HoloMap::mobius(d, {from_matrix(d, parse_matrix(field(params, "P", "mobius")))});
  }
  if (f == "product") {
    require(d.kind() == DomainKind::Product, "product map needs a product domain");
    if (children.size() != d.factors().size()) bad("product map needs one child per factor");
    std::vector<HoloMap> maps;
    for (std::size_t i = 0; i < children.size(); ++i) maps.push_back(parse_map(d.factors()[i], children[i]));
    return HoloMap::product(d, maps);
  }
  if (f == "compose") {
    if (children.empty()) bad("compose needs at least one child");
    std::vector<HoloMap> maps;
    for (const auto& c : children) maps.push_back(parse_map(d, c));
    return HoloMap::compose(maps);
  }
  if (f == "factor_embed") {
    require(d.kind() == DomainKind::Product, "factor_embed needs a product domain");
    const int index = int_of(field(params, "index", "factor_embed"), "factor_embed index");
    require(index >= 0 && static_cast<std::size_t>(index) < d.factors().size(), "factor_embed: index out of range");
    if (children.size() != 1) bad("factor_embed needs exactly one child");
    const auto i = static_cast<std::size_t>(index);
    return HoloMap::factor_embed(d, i, parse_map(d.factors()[i], children[0]));
  }
  bad("unknown map family \"" + f + "\"");
}

Json to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const CMat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(CVec(m.row(r).transpose())));
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace cartan::jsonio
