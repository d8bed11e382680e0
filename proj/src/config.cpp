#include "lpqtem/config.hpp"

#include "lpqtem/errors.hpp"
#include "lpqtem/generator.hpp"
#include "lpqtem/kernel.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lpq {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) fail(where.empty() ? "config" : where, "must be an object");
  for (const auto& [k, v] : obj.items())
    if (!known.count(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(name, "must be a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail(name, "must be an integer");
    if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
      fail(name, "must be non-negative");
    out = v.get<T>();
  } else {
    if (!v.is_number()) fail(name, "must be a number");
    out = v.get<double>();
  }
}

// Accepts a number >= 1 or the string "inf".
void read_exponent(const json& obj, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string name = std::string("norm.") + key;
  if (v.is_string()) {
    if (v.get<std::string>() != "inf") fail(name, "string value must be \"inf\"");
    out = kInf;
  } else if (v.is_number()) {
    out = v.get<double>();
  } else {
    fail(name, "must be a number or \"inf\"");
  }
}

json exponent_json(double r) { return std::isinf(r) ? json("inf") : json(r); }

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

DeviceSet ExperimentConfig::devices() const {
  return DeviceSet::regular(device_count, device_spacing, device_offset, delta_prime, y_min, y_max);
}

void ExperimentConfig::validate() const {
  if (order_t < 2) fail("generator.order_t", "must be >= 2");
  if (order_s < 2) fail("generator.order_s", "must be >= 2");
  if (ring_size < 8) fail("generator.ring_size", "must be >= 8");
  if (!(x_max > x_min)) fail("grid.x_max", "must exceed grid.x_min");
  if (!(y_max > y_min)) fail("grid.y_max", "must exceed grid.y_min");
  if (samples_per_unit < 2) fail("grid.samples_per_unit", "must be >= 2");
  if (!(p >= 1)) fail("norm.p", "must be >= 1 or \"inf\"");
  if (!(q >= 1)) fail("norm.q", "must be >= 1 or \"inf\"");
  if (device_count < 1) fail("devices.count", "must be >= 1");
  if (!(device_spacing > 0)) fail("devices.spacing", "must be positive");
  if (!(delta_prime > 0)) fail("devices.delta_prime", "must be positive");
  if (!(tem.c_bound > 0)) fail("tem.c_bound", "must be positive");
  if (!(tem.b_level > tem.c_bound)) fail("tem.b_level", "must exceed tem.c_bound");
  if (!(tem.delta > 0)) fail("tem.delta", "must be positive");
  if (!(tem.alpha >= 0)) fail("tem.alpha", "must be >= 0");
  if (n_max < 0) fail("iteration.n_max", "must be >= 0");
  if (!(tol > 0)) fail("iteration.tol", "must be positive");
  for (double d : frame_deltas)
    if (!(d > 0)) fail("frames.deltas", "entries must be positive");
  for (int n : frame_orders)
    if (n < 0) fail("frames.orders", "entries must be >= 0");
  if (frame_signals < 1) fail("frames.signals", "must be >= 1");
  try {
    tem.validate();
  } catch (const std::exception& e) {
    fail("tem", e.what());
  }
  try {
    const Grid g = grid();
    g.validate();
    const Generator gen(order_t, order_s);
    const Window w = default_coefficient_window(gen, g);
    if (w.empty()) fail("grid", "too small for the generator support plus margin");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("grid", e.what());
  }
  try {
    const DeviceSet d = devices();
    (void)d;
  } catch (const GapError& e) {
    fail("devices", std::string("gap coverage violated: ") + e.what());
  } catch (const std::exception& e) {
    fail("devices", e.what());
  }
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(os.str());
  }
  ExperimentConfig c;
  reject_unknown(j, "", {"generator", "grid", "norm", "devices", "tem", "iteration", "frames",
                         "seed", "output_dir"});
  if (j.contains("generator")) {
    const json& g = j["generator"];
    reject_unknown(g, "generator", {"order_t", "order_s", "ring_size"});
    read(g, "generator", "order_t", c.order_t);
    read(g, "generator", "order_s", c.order_s);
    read(g, "generator", "ring_size", c.ring_size);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"x_min", "x_max", "y_min", "y_max", "samples_per_unit"});
    read(g, "grid", "x_min", c.x_min);
    read(g, "grid", "x_max", c.x_max);
    read(g, "grid", "y_min", c.y_min);
    read(g, "grid", "y_max", c.y_max);
    read(g, "grid", "samples_per_unit", c.samples_per_unit);
  }
  if (j.contains("norm")) {
    const json& n = j["norm"];
    reject_unknown(n, "norm", {"p", "q"});
    read_exponent(n, "p", c.p);
    read_exponent(n, "q", c.q);
  }
  if (j.contains("devices")) {
    const json& d = j["devices"];
    reject_unknown(d, "devices", {"count", "spacing", "offset", "delta_prime"});
    read(d, "devices", "count", c.device_count);
    read(d, "devices", "spacing", c.device_spacing);
    read(d, "devices", "offset", c.device_offset);
    read(d, "devices", "delta_prime", c.delta_prime);
  }
  if (j.contains("tem")) {
    const json& t = j["tem"];
    reject_unknown(t, "tem", {"mode", "c_bound", "b_level", "delta", "alpha"});
    if (t.contains("mode")) {
      std::string m;
      read(t, "tem", "mode", m);
      try {
        c.tem.mode = tem_mode_from_string(m);
      } catch (const std::exception&) {
        fail("tem.mode", "must be \"crossing\" or \"integrate-and-fire\"");
      }
    }
    read(t, "tem", "c_bound", c.tem.c_bound);
    read(t, "tem", "b_level", c.tem.b_level);
    read(t, "tem", "delta", c.tem.delta);
    read(t, "tem", "alpha", c.tem.alpha);
  }
  if (j.contains("iteration")) {
    const json& it = j["iteration"];
    reject_unknown(it, "iteration", {"n_max", "tol"});
    read(it, "iteration", "n_max", c.n_max);
    read(it, "iteration", "tol", c.tol);
  }
  if (j.contains("frames")) {
    const json& f = j["frames"];
    reject_unknown(f, "frames", {"deltas", "orders", "signals"});
    if (f.contains("deltas")) {
      if (!f["deltas"].is_array()) fail("frames.deltas", "must be an array");
      c.frame_deltas.clear();
      for (const auto& v : f["deltas"]) {
        if (!v.is_number()) fail("frames.deltas", "entries must be numbers");
        c.frame_deltas.push_back(v.get<double>());
      }
    }
    if (f.contains("orders")) {
      if (!f["orders"].is_array()) fail("frames.orders", "must be an array");
      c.frame_orders.clear();
      for (const auto& v : f["orders"]) {
        if (!v.is_number_integer()) fail("frames.orders", "entries must be integers");
        c.frame_orders.push_back(v.get<int>());
      }
    }
    read(f, "frames", "signals", c.frame_signals);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  read(j, "", "output_dir", c.output_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["generator"] = {{"order_t", c.order_t}, {"order_s", c.order_s}, {"ring_size", c.ring_size}};
  j["grid"] = {{"x_min", c.x_min}, {"x_max", c.x_max}, {"y_min", c.y_min}, {"y_max", c.y_max},
               {"samples_per_unit", c.samples_per_unit}};
  j["norm"] = {{"p", exponent_json(c.p)}, {"q", exponent_json(c.q)}};
  j["devices"] = {{"count", c.device_count}, {"spacing", c.device_spacing},
                  {"offset", c.device_offset}, {"delta_prime", c.delta_prime}};
  j["tem"] = {{"mode", to_string(c.tem.mode)}, {"c_bound", c.tem.c_bound},
              {"b_level", c.tem.b_level}, {"delta", c.tem.delta}, {"alpha", c.tem.alpha}};
  j["iteration"] = {{"n_max", c.n_max}, {"tol", c.tol}};
  j["frames"] = {{"deltas", c.frame_deltas}, {"orders", c.frame_orders}, {"signals", c.frame_signals}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

}  // namespace lpq
