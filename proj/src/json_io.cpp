#include "grf/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "grf/errors.hpp"

namespace grf::io {

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return ptr + "/" + escaped;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

void require_object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok |= key == a;
    if (!ok) throw SchemaError(child(ptr, key), "unknown field");
  }
}

const json& require(const json& j, const std::string& ptr, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(ptr, key), "missing required field");
  return *it;
}

double get_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw SchemaError(ptr, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw SchemaError(ptr, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], child(ptr, i)));
  return out;
}

Vector get_vector(const json& j, const std::string& ptr) {
  const auto v = get_numbers(j, ptr);
  if (v.empty()) throw SchemaError(ptr, "expected a non-empty array");
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

// Converts constructor validation failures into schema errors at `ptr`.
template <class F>
auto guarded(const std::string& ptr, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(ptr, e.what());
  }
}

}  // namespace

BasisFunction basis_from_json(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  const std::string type = get_string(require(j, ptr, "type"), child(ptr, "type"));
  return guarded(ptr, [&]() -> BasisFunction {
    if (type == "monomial") {
      require_object(j, ptr, {"type", "exponents", "amplitude"});
      std::vector<int> e;
      const json& ej = require(j, ptr, "exponents");
      if (!ej.is_array() || ej.empty()) throw SchemaError(child(ptr, "exponents"), "expected a non-empty array");
      for (std::size_t i = 0; i < ej.size(); ++i) {
        const int v = get_int(ej[i], child(child(ptr, "exponents"), i));
        if (v < 0) throw SchemaError(child(child(ptr, "exponents"), i), "exponent must be non-negative");
        e.push_back(v);
      }
      return BasisFunction::monomial(MultiIndex(e), get_vector(require(j, ptr, "amplitude"), child(ptr, "amplitude")));
    }
    if (type == "harmonic") {
      require_object(j, ptr, {"type", "frequency", "phase", "amplitude"});
      const double phase = j.contains("phase") ? get_number(j["phase"], child(ptr, "phase")) : 0.0;
      return BasisFunction::harmonic(get_vector(require(j, ptr, "frequency"), child(ptr, "frequency")), phase,
                                     get_vector(require(j, ptr, "amplitude"), child(ptr, "amplitude")));
    }
    if (type == "bump") {
      require_object(j, ptr, {"type", "center", "radius", "amplitude"});
      const double radius = get_number(require(j, ptr, "radius"), child(ptr, "radius"));
      if (!(radius > 0.0)) throw SchemaError(child(ptr, "radius"), "radius must be positive");
      return BasisFunction::bump(get_vector(require(j, ptr, "center"), child(ptr, "center")), radius,
                                 get_vector(require(j, ptr, "amplitude"), child(ptr, "amplitude")));
    }
    if (type == "scaled") {
      require_object(j, ptr, {"type", "factor", "inner"});
      return BasisFunction::scaled(basis_from_json(require(j, ptr, "inner"), child(ptr, "inner")),
                                   get_number(require(j, ptr, "factor"), child(ptr, "factor")));
    }
    throw SchemaError(child(ptr, "type"), "unknown basis type '" + type + "'");
  });
}

json to_json(const BasisFunction& f) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Monomial>)
          return {{"type", "monomial"}, {"exponents", x.exponents.entries()}, {"amplitude", vec_json(x.amplitude)}};
        else if constexpr (std::is_same_v<T, Harmonic>)
          return {{"type", "harmonic"},
                  {"frequency", vec_json(x.frequency)},
                  {"phase", x.phase},
                  {"amplitude", vec_json(x.amplitude)}};
        else if constexpr (std::is_same_v<T, Bump>)
          return {{"type", "bump"}, {"center", vec_json(x.center)}, {"radius", x.radius}, {"amplitude", vec_json(x.amplitude)}};
        else
          return {{"type", "scaled"}, {"factor", x.factor}, {"inner", to_json(*x.inner)}};
      },
      f.variant());
}

KLField field_from_json(const json& j, const std::string& ptr) {
  require_object(j, ptr, {"m", "k", "basis", "sigmas"});
  const int m = get_int(require(j, ptr, "m"), child(ptr, "m"));
  const int k = get_int(require(j, ptr, "k"), child(ptr, "k"));
  if (m < 1) throw SchemaError(child(ptr, "m"), "must be >= 1");
  if (k < 1) throw SchemaError(child(ptr, "k"), "must be >= 1");
  const json& bj = require(j, ptr, "basis");
  if (!bj.is_array()) throw SchemaError(child(ptr, "basis"), "expected an array");
  std::vector<BasisFunction> basis;
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string bp = child(child(ptr, "basis"), i);
    BasisFunction f = basis_from_json(bj[i], bp);
    if (f.input_dim() != m) throw SchemaError(bp, "input dimension differs from m");
    if (f.output_dim() != k) throw SchemaError(bp, "amplitude length differs from k");
    basis.push_back(std::move(f));
  }
  std::vector<double> sigmas;
  if (j.contains("sigmas")) {
    sigmas = get_numbers(j["sigmas"], child(ptr, "sigmas"));
    if (sigmas.size() != basis.size()) throw SchemaError(child(ptr, "sigmas"), "need one sigma per basis function");
    for (std::size_t i = 0; i < sigmas.size(); ++i)
      if (!(sigmas[i] > 0.0)) throw SchemaError(child(child(ptr, "sigmas"), i), "sigma must be positive");
  }
  return guarded(ptr, [&] { return KLField(m, k, std::move(basis), std::move(sigmas)); });
}

json to_json(const KLField& field) {
  json basis = json::array();
  for (const auto& f : field.basis()) basis.push_back(to_json(f));
  return {{"m", field.m()}, {"k", field.k()}, {"basis", basis}, {"sigmas", field.sigmas()}};
}

Box box_from_json(const json& j, const std::string& ptr) {
  require_object(j, ptr, {"lower", "upper", "resolution"});
  std::vector<double> lower = get_numbers(require(j, ptr, "lower"), child(ptr, "lower"));
  std::vector<double> upper = get_numbers(require(j, ptr, "upper"), child(ptr, "upper"));
  if (lower.empty()) throw SchemaError(child(ptr, "lower"), "expected a non-empty array");
  if (upper.size() != lower.size()) throw SchemaError(child(ptr, "upper"), "length differs from lower");
  std::vector<int> res(lower.size(), Box::default_resolution(static_cast<int>(lower.size())));
  if (j.contains("resolution")) {
    const json& rj = j["resolution"];
    const std::string rp = child(ptr, "resolution");
    if (rj.is_array()) {
      if (rj.size() != lower.size()) throw SchemaError(rp, "length differs from lower");
      for (std::size_t i = 0; i < rj.size(); ++i) res[i] = get_int(rj[i], child(rp, i));
    } else {
      res.assign(lower.size(), get_int(rj, rp));
    }
  }
  return guarded(ptr, [&] { return Box(lower, upper, res); });
}

json to_json(const Box& box) {
  return {{"lower", box.lower()}, {"upper", box.upper()}, {"resolution", box.resolution()}};
}

EventSpec event_from_json(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  const std::string type = get_string(require(j, ptr, "type"), child(ptr, "type"));
  auto box = [&] { return box_from_json(require(j, ptr, "box"), child(ptr, "box")); };
  if (type == "sup_norm_below") {
    require_object(j, ptr, {"type", "box", "order", "threshold"});
    const int order = j.contains("order") ? get_int(j["order"], child(ptr, "order")) : 0;
    if (order < 0) throw SchemaError(child(ptr, "order"), "must be >= 0");
    return SupNormBelow{box(), order, get_number(require(j, ptr, "threshold"), child(ptr, "threshold"))};
  }
  if (type == "zero_count_equals") {
    require_object(j, ptr, {"type", "box", "count"});
    return ZeroCountEquals{box(), get_int(require(j, ptr, "count"), child(ptr, "count"))};
  }
  if (type == "positive_on_box") {
    require_object(j, ptr, {"type", "box"});
    return PositiveOnBox{box()};
  }
  if (type == "degenerate_zero") {
    require_object(j, ptr, {"type", "box", "value_eps", "deriv_eps"});
    return DegenerateZero{box(), get_number(require(j, ptr, "value_eps"), child(ptr, "value_eps")),
                          get_number(require(j, ptr, "deriv_eps"), child(ptr, "deriv_eps"))};
  }
  throw SchemaError(child(ptr, "type"), "unknown event type '" + type + "'");
}

json to_json(const EventSpec& event) {
  json j = std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SupNormBelow>)
          return {{"box", to_json(x.box)}, {"order", x.order}, {"threshold", x.threshold}};
        else if constexpr (std::is_same_v<T, ZeroCountEquals>)
          return {{"box", to_json(x.box)}, {"count", x.count}};
        else if constexpr (std::is_same_v<T, PositiveOnBox>)
          return {{"box", to_json(x.box)}};
        else
          return {{"box", to_json(x.box)}, {"value_eps", x.value_eps}, {"deriv_eps", x.deriv_eps}};
      },
      event);
  j["type"] = std::string(event_name(event));
  return j;
}

CovarianceKernel kernel_from_json(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  const std::string type = get_string(require(j, ptr, "type"), child(ptr, "type"));
  if (type == "from_kl") {
    require_object(j, ptr, {"type", "field"});
    return CovarianceKernel::from_field(make_field(field_from_json(require(j, ptr, "field"), child(ptr, "field"))));
  }
  if (type == "closed_form") {
    require_object(j, ptr, {"type", "tag", "m"});
    const std::string tag = get_string(require(j, ptr, "tag"), child(ptr, "tag"));
    const auto parsed = closed_form_from_string(tag);
    if (!parsed) throw SchemaError(child(ptr, "tag"), "unknown closed-form kernel '" + tag + "'");
    const int m = j.contains("m") ? get_int(j["m"], child(ptr, "m")) : 1;
    if (m < 1) throw SchemaError(child(ptr, "m"), "must be >= 1");
    return CovarianceKernel::closed_form(*parsed, m);
  }
  throw SchemaError(child(ptr, "type"), "unknown kernel type '" + type + "'");
}

json to_json(const MCEstimate& e) {
  return {{"p_hat", e.p_hat},
          {"stderr", e.std_error},
          {"n", e.n_samples},
          {"seed", e.seed},
          {"ci95", {e.ci_low, e.ci_high}}};
}

std::string digest(const json& j) {
  const std::string canonical = j.dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string field_digest(const KLField& field) { return digest(to_json(field)); }

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

}  // namespace grf::io
