#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinepr {

// One named column of a rectangular numeric table.  Headers carry the unit in
// brackets (e.g. "tau[dimensionless]", "theta0[rad]") and must stay free of
// characters that would need RFC-4180 quoting.
struct CsvColumn {
  std::string header;
  std::vector<double> values;
};

// shortest lossless decimal form (printf %.17g); used for every number we
// persist so reruns are byte-comparable
std::string format_g17(double x);

// RFC-4180-style dump: header row, '.' decimal separator, one row per index.
// All columns must be the same length.
void write_csv(std::ostream& os, const std::vector<CsvColumn>& columns);

// Write content to dir/name (creating dir if needed) and return the full
// path.  Used for CSV tables and JSON manifests.
std::string write_text_file(const std::string& dir, const std::string& name,
                            const std::string& content);

}
