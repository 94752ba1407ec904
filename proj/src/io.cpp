#include "thermolens/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thermolens/errors.hpp"

namespace thermolens {

namespace {

void append(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string render_timeseries(const std::vector<EnergyReport>& series) {
  std::string out(kSeriesHeader);
  out += '\n';
  for (const auto& r : series) {
    const double row[] = {r.t,       r.E0,      r.E1,     r.E2,    r.D_p,
                          r.E_theta, r.D_theta, r.Lambda, r.Fterm, r.min_alpha};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      append(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<EnergyReport> parse_timeseries(std::string_view text) {
  std::vector<EnergyReport> out;
  std::istringstream is{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kSeriesHeader) throw ParseError(1, "unexpected series header");
      continue;
    }
    if (line.empty()) continue;
    double v[10];
    const char* p = line.data();
    const char* end = p + line.size();
    for (int i = 0; i < 10; ++i) {
      auto [ptr, ec] = std::from_chars(p, end, v[i]);
      if (ec != std::errc()) throw ParseError(line_no, "bad number in series");
      p = ptr;
      if (i < 9) {
        if (p == end || *p != ',') throw ParseError(line_no, "expected 10 columns");
        ++p;
      }
    }
    if (p != end) throw ParseError(line_no, "trailing characters in series row");
    out.push_back(EnergyReport{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]});
  }
  if (line_no == 0) throw ParseError(1, "empty series file");
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw IoError(path.string(), "write failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_timeseries(const std::vector<EnergyReport>& series, const std::filesystem::path& path) {
  write_text(path, render_timeseries(series));
}

std::vector<EnergyReport> read_timeseries(const std::filesystem::path& path) {
  return parse_timeseries(read_text(path));
}

std::string render_study(const ConvergenceStudy& study) {
  std::string out = "level,n,dt,error\n";
  for (std::size_t i = 0; i < study.levels.size(); ++i) {
    const auto& l = study.levels[i];
    out += std::to_string(i) + ',' + std::to_string(l.n) + ',';
    append(out, l.dt);
    out += ',';
    append(out, l.error);
    out += '\n';
  }
  out += "orders,spatial=";
  append(out, study.spatial_order);
  out += ",temporal=";
  append(out, study.temporal_order);
  out += '\n';
  return out;
}

}  // namespace thermolens
