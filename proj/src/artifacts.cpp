#include "tailsim/artifacts.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tailsim {

void write_series_csv(const std::string& path, const TimeSeries& s) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("csv: cannot open " + path);
  std::fprintf(f, "tau,re,im,abs,lpi,flags\n");
  const auto lpi = running_lpi(s);
  for (size_t i = 0; i < s.tau.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", s.tau[i], s.val[i].real(),
                 s.val[i].imag(), std::abs(s.val[i]), lpi[i], s.flags[i]);
  }
  std::fclose(f);
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  TimeSeries s;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 6) continue;
    s.tau.push_back(std::stod(cells[0]));
    s.val.push_back({std::stod(cells[1]), std::stod(cells[2])});
    s.flags.push_back(std::stoi(cells[5]));
  }
  return s;
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const TimeSeries& s) {
  // collect finite log-log points
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < s.tau.size(); ++i) {
    const double a = std::abs(s.val[i]);
    if (s.tau[i] > 0.0 && a > 0.0 && std::isfinite(a))
      pts.push_back({std::log10(s.tau[i]), std::log10(a)});
  }
  const int W = 640, H = 420, ML = 60, MB = 40, MT = 30, MR = 20;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
      << title << "</text>\n";
  if (pts.size() >= 2) {
    double x0 = pts.front().first, x1 = pts.front().first;
    double y0 = pts.front().second, y1 = pts.front().second;
    for (auto& p : pts) {
      x0 = std::min(x0, p.first);
      x1 = std::max(x1, p.first);
      y0 = std::min(y0, p.second);
      y1 = std::max(y1, p.second);
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
    auto px = [&](double x) { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - y0) / (y1 - y0) * (H - MB - MT); };
    // axes with decade ticks
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    for (int d = int(std::ceil(x0)); d <= int(std::floor(x1)); ++d) {
      out << "<line x1=\"" << px(d) << "\" y1=\"" << H - MB << "\" x2=\"" << px(d)
          << "\" y2=\"" << H - MB + 5 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << px(d) << "\" y=\"" << H - MB + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    }
    for (int d = int(std::ceil(y0)); d <= int(std::floor(y1)); ++d) {
      out << "<line x1=\"" << ML - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << ML
          << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << ML - 8 << "\" y=\"" << py(d) + 4
          << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
    for (auto& p : pts) out << px(p.first) << "," << py(p.second) << " ";
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

namespace {

using nlohmann::json;

std::string check_node(const json& schema, const json& doc, const std::string& where) {
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    const bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                    (t == "string" && doc.is_string()) ||
                    (t == "number" && (doc.is_number() || doc.is_number_integer())) ||
                    (t == "integer" && doc.is_number_integer()) ||
                    (t == "boolean" && doc.is_boolean());
    if (!ok) return where + ": expected type " + t;
  }
  if (schema.contains("required"))
    for (const auto& req : schema["required"])
      if (!doc.contains(req.get<std::string>()))
        return where + ": missing required member \"" + req.get<std::string>() + "\"";
  if (schema.contains("properties") && doc.is_object())
    for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
      if (doc.contains(it.key())) {
        const std::string sub = check_node(it.value(), doc[it.key()], where + "/" + it.key());
        if (!sub.empty()) return sub;
      }
  if (schema.contains("items") && doc.is_array())
    for (size_t i = 0; i < doc.size(); ++i) {
      const std::string sub =
          check_node(schema["items"], doc[i], where + "[" + std::to_string(i) + "]");
      if (!sub.empty()) return sub;
    }
  return "";
}

} // namespace

std::string validate_against_schema(const std::string& schema_json,
                                    const std::string& doc_json) {
  json schema = json::parse(schema_json);
  json doc = json::parse(doc_json);
  return check_node(schema, doc, "#");
}

} // namespace tailsim
