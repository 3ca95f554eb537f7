#pragma once

// Trajectory files (CSV / JSON lines) and SVG point clouds.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ensemble.hpp"
#include "error.hpp"

namespace hyperwalk {

enum class TrajectoryFormat { csv, jsonl };

inline constexpr std::string_view kCsvHeader =
    "traj,n,omega,varsigma,tau,x,y,saturated,busemann_plus,busemann_minus,dist_p";

inline TrajectoryFormat parse_format(std::string_view s) {
  if (s == "csv") return TrajectoryFormat::csv;
  if (s == "jsonl") return TrajectoryFormat::jsonl;
  throw ConfigError("unknown trajectory format: " + std::string(s));
}

namespace detail {

/// Shortest decimal string that parses back to the same double.
inline void append_double(std::string& out, double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

inline void append_uint(std::string& out, std::uint64_t v) {
  std::array<char, 24> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

inline void append_json_double(std::string& out, double v) {
  if (std::isfinite(v)) {
    append_double(out, v);
  } else {
    out += '"';
    append_double(out, v);
    out += '"';
  }
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad " + std::string(what) + " value: '" + std::string(s) + "'");
  }
  return v;
}

inline double json_double(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return parse_number<double>(v.get<std::string>(), key);
  return v.get<double>();
}

}  // namespace detail

inline std::string csv_row(const TrajectoryRecord& r) {
  std::string s;
  detail::append_uint(s, r.traj);
  s += ',';
  detail::append_uint(s, r.n);
  for (const double v : {r.omega, r.varsigma, r.tau, r.x, r.y}) {
    s += ',';
    detail::append_double(s, v);
  }
  s += r.saturated ? ",1" : ",0";
  for (const double v : {r.busemann_plus, r.busemann_minus, r.dist_p}) {
    s += ',';
    detail::append_double(s, v);
  }
  return s;
}

inline std::string jsonl_row(const TrajectoryRecord& r) {
  std::string s = "{\"traj\":";
  detail::append_uint(s, r.traj);
  s += ",\"n\":";
  detail::append_uint(s, r.n);
  const std::pair<const char*, double> first[] = {
      {"omega", r.omega}, {"varsigma", r.varsigma}, {"tau", r.tau}, {"x", r.x}, {"y", r.y}};
  for (const auto& [k, v] : first) {
    s += ",\"";
    s += k;
    s += "\":";
    detail::append_json_double(s, v);
  }
  s += r.saturated ? ",\"saturated\":true" : ",\"saturated\":false";
  const std::pair<const char*, double> rest[] = {
      {"busemann_plus", r.busemann_plus}, {"busemann_minus", r.busemann_minus}, {"dist_p", r.dist_p}};
  for (const auto& [k, v] : rest) {
    s += ",\"";
    s += k;
    s += "\":";
    detail::append_json_double(s, v);
  }
  s += '}';
  return s;
}

inline std::size_t write_trajectory(std::span<const TrajectoryRecord> records, std::ostream& out,
                                    TrajectoryFormat format) {
  std::size_t written = 0;
  if (format == TrajectoryFormat::csv) out << kCsvHeader << '\n';
  if (!out) throw PartialResult("trajectory write failed", written);
  for (const auto& r : records) {
    out << (format == TrajectoryFormat::csv ? csv_row(r) : jsonl_row(r)) << '\n';
    if (!out) throw PartialResult("trajectory write failed", written);
    ++written;
  }
  out.flush();
  if (!out) throw PartialResult("trajectory write failed", written);
  return written;
}

/// Returns the number of records written; IO failure throws PartialResult
/// carrying the count of rows completed before it.
inline std::size_t write_trajectory(std::span<const TrajectoryRecord> records,
                                    const std::string& path, TrajectoryFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PartialResult("cannot open " + path + " for writing", 0);
  return write_trajectory(records, out, format);
}

inline TrajectoryRecord parse_csv_row(std::string_view line) {
  std::array<std::string_view, 11> f;
  std::size_t count = 0, start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (count == f.size()) throw ConfigError("too many CSV fields: " + std::string(line));
      f[count++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (count != f.size()) throw ConfigError("expected 11 CSV fields: " + std::string(line));
  TrajectoryRecord r;
  r.traj = detail::parse_number<std::uint64_t>(f[0], "traj");
  r.n = detail::parse_number<std::uint64_t>(f[1], "n");
  r.omega = detail::parse_number<double>(f[2], "omega");
  r.varsigma = detail::parse_number<double>(f[3], "varsigma");
  r.tau = detail::parse_number<double>(f[4], "tau");
  r.x = detail::parse_number<double>(f[5], "x");
  r.y = detail::parse_number<double>(f[6], "y");
  if (f[7] != "0" && f[7] != "1") throw ConfigError("bad saturated value: " + std::string(f[7]));
  r.saturated = f[7] == "1";
  r.busemann_plus = detail::parse_number<double>(f[8], "busemann_plus");
  r.busemann_minus = detail::parse_number<double>(f[9], "busemann_minus");
  r.dist_p = detail::parse_number<double>(f[10], "dist_p");
  return r;
}

inline TrajectoryRecord parse_jsonl_row(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  TrajectoryRecord r;
  r.traj = j.at("traj").get<std::uint64_t>();
  r.n = j.at("n").get<std::uint64_t>();
  r.omega = detail::json_double(j, "omega");
  r.varsigma = detail::json_double(j, "varsigma");
  r.tau = detail::json_double(j, "tau");
  r.x = detail::json_double(j, "x");
  r.y = detail::json_double(j, "y");
  r.saturated = j.at("saturated").get<bool>();
  r.busemann_plus = detail::json_double(j, "busemann_plus");
  r.busemann_minus = detail::json_double(j, "busemann_minus");
  r.dist_p = detail::json_double(j, "dist_p");
  return r;
}

/// Reads a CSV (recognized by its header) or JSON-lines trajectory file.
inline std::vector<TrajectoryRecord> read_trajectory(std::istream& in) {
  std::vector<TrajectoryRecord> out;
  std::string line;
  bool csv = false, first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      first = false;
      if (line == kCsvHeader) {
        csv = true;
        continue;
      }
    }
    if (line.empty()) continue;
    out.push_back(csv ? parse_csv_row(line) : parse_jsonl_row(line));
  }
  return out;
}

inline std::vector<TrajectoryRecord> read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return read_trajectory(in);
}

// ---------------------------------------------------------------------------
// SVG point clouds

struct SvgStyle {
  int pixels = 800;
  double dot_radius = 0.004;
  double dot_opacity = 0.35;
  std::string dot_color = "#1f4e9c";
  std::string saturated_color = "#c0392b";
  std::string pole_color = "#000000";
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  std::string s(buf);
  if (s == "-0.00000") s = "0.00000";
  return s;
}

}  // namespace detail

/// SVG 1.1 document: unit circle, poles ±α, one dot per unsaturated record,
/// saturated records collapsed into a ring marker at their pole.
inline std::string render_svg(std::span<const TrajectoryRecord> records,
                              const Pole<double>& pole = Pole<double>::unit(),
                              const SvgStyle& style = {}) {
  using detail::svg_num;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.pixels
     << "\" height=\"" << style.pixels << "\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n"
     << "<rect x=\"-1.05\" y=\"-1.05\" width=\"2.1\" height=\"2.1\" fill=\"#ffffff\"/>\n"
     << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.004\"/>\n";

  std::size_t sat_plus = 0, sat_minus = 0;
  os << "<g fill=\"" << style.dot_color << "\" fill-opacity=\"" << style.dot_opacity << "\">\n";
  for (const auto& r : records) {
    if (r.saturated) {
      (r.tau > 0 ? sat_plus : sat_minus)++;
      continue;
    }
    // SVG's y axis points down.
    os << "<circle cx=\"" << svg_num(r.x) << "\" cy=\"" << svg_num(-r.y) << "\" r=\""
       << svg_num(style.dot_radius) << "\"/>\n";
  }
  os << "</g>\n";

  const auto a = pole.value();
  for (const int eps : {+1, -1}) {
    const double px = eps * a.real();
    const double py = -eps * a.imag();
    os << "<g id=\"pole-" << (eps > 0 ? "plus" : "minus") << "\">"
       << "<line x1=\"" << svg_num(px - 0.03) << "\" y1=\"" << svg_num(py) << "\" x2=\""
       << svg_num(px + 0.03) << "\" y2=\"" << svg_num(py) << "\" stroke=\"" << style.pole_color
       << "\" stroke-width=\"0.006\"/>"
       << "<line x1=\"" << svg_num(px) << "\" y1=\"" << svg_num(py - 0.03) << "\" x2=\""
       << svg_num(px) << "\" y2=\"" << svg_num(py + 0.03) << "\" stroke=\"" << style.pole_color
       << "\" stroke-width=\"0.006\"/></g>\n";
    const std::size_t sat = eps > 0 ? sat_plus : sat_minus;
    if (sat > 0) {
      os << "<circle class=\"saturated\" cx=\"" << svg_num(px) << "\" cy=\"" << svg_num(py)
         << "\" r=\"0.025\" fill=\"none\" stroke=\"" << style.saturated_color
         << "\" stroke-width=\"0.008\"><title>" << sat << " saturated points</title></circle>\n";
    }
  }
  if (!records.empty() && sat_plus + sat_minus == records.size()) {
    os << "<text x=\"-1.0\" y=\"-0.95\" font-size=\"0.06\" fill=\"" << style.saturated_color
       << "\">warning: all " << records.size() << " points saturated at the poles</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void render_pointcloud(std::span<const TrajectoryRecord> records, const std::string& path,
                              const Pole<double>& pole = Pole<double>::unit(),
                              const SvgStyle& style = {}) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PartialResult("cannot open " + path + " for writing", 0);
  out << render_svg(records, pole, style);
  if (!out) throw PartialResult("SVG write failed: " + path, 0);
}

}  // namespace hyperwalk
