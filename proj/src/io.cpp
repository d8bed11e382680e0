#include "lpqtem/io.hpp"

#include "lpqtem/errors.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace lpq {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) f.push_back(cur);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  return f;
}

double parse_real(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    std::ostringstream os;
    os << "line " << line << ": '" << s << "' is not a number";
    throw InputError(os.str());
  }
  return v;
}

long parse_int(const std::string& s, int line) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    std::ostringstream os;
    os << "line " << line << ": '" << s << "' is not an integer";
    throw InputError(os.str());
  }
  return v;
}

void expect_header(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line) || line != header)
    throw InputError("expected CSV header '" + header + "'");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InputError(std::string("non-finite value in ") + what);
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_events_csv(std::ostream& os, const TemOutput& out) {
  os << "device_id,fire_index,time,recovered_value\n";
  for (std::size_t j = 0; j < out.devices.size(); ++j) {
    const auto& d = out.devices[j];
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      require_finite(d.times[i], "events");
      require_finite(d.values[i], "events");
      os << j << ',' << i + 1 << ',' << format_real(d.times[i]) << ',' << format_real(d.values[i])
         << '\n';
    }
  }
}

void read_events_csv(std::istream& is, TemOutput& out, std::size_t device_count) {
  expect_header(is, "device_id,fire_index,time,recovered_value");
  out.devices.assign(device_count, DeviceEvents{});
  std::string line;
  int ln = 1;
  while (std::getline(is, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw InputError("line " + std::to_string(ln) + ": expected 4 fields");
    const long j = parse_int(f[0], ln), i = parse_int(f[1], ln);
    if (j < 0 || std::size_t(j) >= device_count)
      throw InputError("line " + std::to_string(ln) + ": device id out of range");
    auto& d = out.devices[j];
    if (i != long(d.times.size()) + 1)
      throw InputError("line " + std::to_string(ln) + ": fire indices must be consecutive");
    d.times.push_back(parse_real(f[2], ln));
    d.values.push_back(parse_real(f[3], ln));
  }
}

void write_convergence_csv(std::ostream& os, const ReconstructionReport& rep) {
  os << "iter,error_lpq,ratio\n";
  for (std::size_t n = 0; n < rep.errors.size(); ++n) {
    require_finite(rep.errors[n], "convergence");
    os << n << ',' << format_real(rep.errors[n]) << ',';
    if (n > 0 && rep.errors[n - 1] > 0) os << format_real(rep.errors[n] / rep.errors[n - 1]);
    os << '\n';
  }
}

void write_vsignal_csv(std::ostream& os, const VSignal& f) {
  const Window& w = f.coefficients().window();
  os << "k1,k2,c\n";
  for (int a = w.k1_lo; a <= w.k1_hi; ++a)
    for (int b = w.k2_lo; b <= w.k2_hi; ++b) {
      const double c = f.coefficients()(a, b);
      require_finite(c, "signal");
      os << a << ',' << b << ',' << format_real(c) << '\n';
    }
}

VSignal read_vsignal_csv(std::istream& is, const Generator& g) {
  expect_header(is, "k1,k2,c");
  std::map<std::pair<long, long>, double> m;
  std::string line;
  int ln = 1;
  while (std::getline(is, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 3) throw InputError("line " + std::to_string(ln) + ": expected 3 fields");
    m[{parse_int(f[0], ln), parse_int(f[1], ln)}] = parse_real(f[2], ln);
  }
  if (m.empty()) throw InputError("signal CSV has no coefficients");
  Window w{int(m.begin()->first.first), int(m.rbegin()->first.first), 0, -1};
  w.k2_lo = w.k2_hi = int(m.begin()->first.second);
  for (const auto& [k, v] : m) {
    w.k2_lo = std::min(w.k2_lo, int(k.second));
    w.k2_hi = std::max(w.k2_hi, int(k.second));
  }
  if (m.size() != w.size()) throw InputError("signal CSV does not fill a rectangular window");
  CoefSeq c(w);
  for (const auto& [k, v] : m) c(int(k.first), int(k.second)) = v;
  return VSignal(g, std::move(c));
}

std::string write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("write failed: " + path);
  return path;
}

}  // namespace lpq
