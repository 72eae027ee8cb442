#include "fcs/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fcs/errors.hpp"

namespace fcs {

void SeriesData::validate() const {
  if (kind == SeriesKind::Univariate) {
    if (y.empty()) throw DataError("series: empty univariate series");
    if (!d.empty() && d.size() != y.size()) throw DataError("series: y and d length mismatch");
    for (int s : d) {
      if (s != 0 && s != 1) throw DataError("series: states must be 0 or 1");
    }
    for (double value : y) {
      if (!std::isfinite(value)) throw DataError("series: non-finite observation");
    }
  } else {
    if (r.empty() || r.size() != v.size()) throw DataError("series: r and v length mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(v[i])) {
        throw DataError("series: non-finite observation");
      }
      if (!(v[i] > 0.0)) throw DataError("series: realized variance must be strictly positive");
    }
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw DataError("csv: bad numeric field '" + s + "' in " + path);
  }
}

}  // namespace

SeriesData read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  SeriesData data;
  enum class Schema { TY, TYD, TRV } schema;
  if (line == "t,y") {
    schema = Schema::TY;
  } else if (line == "t,y,d") {
    schema = Schema::TYD;
  } else if (line == "t,r,v") {
    schema = Schema::TRV;
    data.kind = SeriesKind::ReturnsVariance;
  } else {
    throw DataError("csv: unrecognized header '" + line + "' in " + path);
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::size_t want = (schema == Schema::TY) ? 2 : 3;
    if (fields.size() != want) throw DataError("csv: wrong field count in " + path);
    switch (schema) {
      case Schema::TY:
        data.y.push_back(parse_double(fields[1], path));
        break;
      case Schema::TYD: {
        data.y.push_back(parse_double(fields[1], path));
        const double s = parse_double(fields[2], path);
        data.d.push_back(static_cast<int>(s));
        break;
      }
      case Schema::TRV:
        data.r.push_back(parse_double(fields[1], path));
        data.v.push_back(parse_double(fields[2], path));
        break;
    }
  }
  data.validate();
  return data;
}

void write_series_csv(const SeriesData& data, const std::string& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write " + path);
  if (data.kind == SeriesKind::Univariate) {
    if (data.has_states()) {
      out << "t,y,d\n";
      for (std::size_t i = 0; i < data.y.size(); ++i) {
        out << (i + 1) << ',' << format_double(data.y[i]) << ',' << data.d[i] << '\n';
      }
    } else {
      out << "t,y\n";
      for (std::size_t i = 0; i < data.y.size(); ++i) {
        out << (i + 1) << ',' << format_double(data.y[i]) << '\n';
      }
    }
  } else {
    out << "t,r,v\n";
    for (std::size_t i = 0; i < data.r.size(); ++i) {
      out << (i + 1) << ',' << format_double(data.r[i]) << ',' << format_double(data.v[i]) << '\n';
    }
  }
}

}  // namespace fcs
