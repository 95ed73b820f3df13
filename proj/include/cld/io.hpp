#pragma once

// File formats: CSV with 17 significant digits, '.' decimal point, LF line
// endings, plus JSON sidecars that echo the effective configuration.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cld/checkerboard.hpp"
#include "cld/copula.hpp"
#include "cld/errors.hpp"
#include "cld/estimation.hpp"
#include "cld/local_dependence.hpp"

namespace cld {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_) : std::runtime_error(msg), line(line_) {}
  int line;
};

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_sample_csv(const std::string& path, const SampleSet& s) {
  std::string out = "u,v\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += fmt17(s.u[i]) + "," + fmt17(s.v[i]) + "\n";
  write_text_file(path, out);
}

inline nlohmann::json sample_meta_json(const SampleSet& s) {
  return {{"seed", s.seed},     {"stream", s.stream}, {"family", s.source},
          {"parameter", s.parameter}, {"n", s.size()},
          {"ks_u", s.ks_u},     {"ks_v", s.ks_v},     {"ks_flagged", s.ks_flagged}};
}

inline void write_sample_meta(const std::string& path, const SampleSet& s) {
  write_text_file(path, sample_meta_json(s).dump(2) + "\n");
}

inline SampleSet read_sample_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  SampleSet s;
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path + ": empty sample file", 0);
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v") throw ParseError(path + ": expected header 'u,v'", lineno);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ": missing comma at line " + std::to_string(lineno), lineno);
    char* end = nullptr;
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    const double u = std::strtod(a.c_str(), &end);
    if (end == a.c_str() || *end != '\0')
      throw ParseError(path + ": bad number at line " + std::to_string(lineno), lineno);
    const double v = std::strtod(b.c_str(), &end);
    if (end == b.c_str() || *end != '\0')
      throw ParseError(path + ": bad number at line " + std::to_string(lineno), lineno);
    s.u.push_back(u);
    s.v.push_back(v);
  }
  if (s.u.empty()) throw ParseError(path + ": no observations", lineno);
  return s;
}

struct SampleMeta {
  std::string family;
  double parameter = 0.0;
  std::uint64_t seed = 0;
};

inline std::optional<SampleMeta> read_sample_meta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  nlohmann::json j;
  in >> j;
  SampleMeta m;
  m.family = j.value("family", "");
  m.parameter = j.value("parameter", 0.0);
  m.seed = j.value("seed", 0ull);
  return m;
}

inline void write_profile_csv(const std::string& path, const DiagonalProfile& prof) {
  std::string out = "u,value\n";
  for (std::size_t k = 0; k < prof.coordinates.size(); ++k)
    out += fmt17(prof.coordinates[k]) + "," + fmt17(prof.values[k]) + "\n";
  write_text_file(path, out);
}

inline void write_report_csv(const std::string& path, const EstimateReport& rep) {
  std::string out = "x,y,g00,i_hat,r_hat,theta_hat,label\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : "nan"; };
  for (const auto& p : rep.points)
    out += fmt17(p.x) + "," + fmt17(p.y) + "," + fmt17(p.g00) + "," + opt(p.i_hat) + "," +
           opt(p.r_hat) + "," + opt(p.theta_hat) + "," + label_name(p.label) + "\n";
  write_text_file(path, out);
}

inline void write_matrix_csv(const std::string& path, const CheckerboardMatrix& cb) {
  std::string out;
  for (int i = 0; i < cb.n; ++i) {
    for (int j = 0; j < cb.n; ++j) {
      out += fmt17(cb.at(i, j));
      out += (j + 1 < cb.n) ? "," : "\n";
    }
  }
  write_text_file(path, out);
}

inline CheckerboardMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw ParseError(path + ": bad number at line " + std::to_string(lineno), lineno);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  CheckerboardMatrix cb(static_cast<int>(rows.size()));
  for (int i = 0; i < cb.n; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(cb.n))
      throw ParseError(path + ": ragged matrix at row " + std::to_string(i + 1), i + 1);
    for (int j = 0; j < cb.n; ++j) cb.at(i, j) = rows[i][j];
  }
  return cb;
}

}  // namespace cld
