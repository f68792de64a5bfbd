#include "spinepr/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "spinepr/errors.hpp"

namespace spinepr {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<CsvColumn>& columns) {
  require(!columns.empty(), errc::invalid_parameter, "csv table has no columns");
  const std::size_t rows = columns.front().values.size();
  for (const auto& c : columns) {
    require(c.values.size() == rows, errc::invalid_parameter,
            "csv column " + c.header + " has mismatched length");
    require(c.header.find_first_of(",\"\n") == std::string::npos, errc::invalid_parameter,
            "csv header would need quoting: " + c.header);
  }
  for (std::size_t c = 0; c < columns.size(); ++c)
    os << (c ? "," : "") << columns[c].header;
  os << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << format_g17(columns[c].values[r]);
    os << "\n";
  }
}

std::string write_text_file(const std::string& dir, const std::string& name,
                            const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);  // ok if it already exists
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::invalid_parameter, "cannot open " + path + " for writing");
  out << content;
  out.close();
  require(out.good(), errc::invalid_parameter, "failed writing " + path);
  return path;
}

}
