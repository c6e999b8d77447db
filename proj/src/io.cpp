#include "torent/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "torent/errors.hpp"

namespace torent {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

SampleSet read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("points CSV: empty input");
  auto header = split_csv_line(line);
  int d = static_cast<int>(header.size());
  for (int j = 0; j < d; ++j) {
    std::string expect = "x" + std::to_string(j);
    if (header[static_cast<std::size_t>(j)] != expect)
      throw IoError("points CSV: expected header column \"" + expect + "\", got \"" +
                    header[static_cast<std::size_t>(j)] + "\"");
  }
  SampleSet s(d);
  std::vector<double> row(static_cast<std::size_t>(d));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != d)
      throw IoError("points CSV: line " + std::to_string(lineno) + " has " +
                    std::to_string(fields.size()) + " fields, expected " + std::to_string(d));
    for (int j = 0; j < d; ++j) {
      try {
        row[static_cast<std::size_t>(j)] = std::stod(fields[static_cast<std::size_t>(j)]);
      } catch (const std::exception&) {
        throw IoError("points CSV: line " + std::to_string(lineno) + ": bad number \"" +
                      fields[static_cast<std::size_t>(j)] + "\"");
      }
    }
    try {
      s.push_back_row(row);
    } catch (const InvalidCoordinate& e) {
      throw IoError("points CSV: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (s.size() == 0) throw IoError("points CSV: no data rows");
  return s;
}

void write_points_csv(std::ostream& out, const SampleSet& s) {
  for (int j = 0; j < s.dim(); ++j) out << (j ? ",x" : "x") << j;
  out << "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto row = s.row(i);
    for (int j = 0; j < s.dim(); ++j) {
      if (j) out << ",";
      out << format_double(row[static_cast<std::size_t>(j)]);
    }
    out << "\n";
  }
}

void write_terms_csv(std::ostream& out, std::span<const double> terms) {
  out << "log_term\n";
  for (double t : terms) out << format_double(t) << "\n";
}

}  // namespace torent
