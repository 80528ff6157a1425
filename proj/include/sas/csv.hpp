#ifndef SAS_CSV_HPP
#define SAS_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace sas {

// Minimal comma-separated table: a header row naming the columns, then data
// rows with the same field count. No quoting, values never contain commas.
// Blank lines and lines starting with '#' are skipped.
struct CsvTable {
  std::string source;  // file name for diagnostics
  std::vector<std::string> columns;
  struct Row {
    std::size_t line = 0;  // 1-based line number in the source
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;

  // Index of a named column; throws data_error naming the source when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, const std::string& source_name);
CsvTable read_csv_file(const std::filesystem::path& path);

// Numeric field parsers with "<source>:<line>: ..." diagnostics.
double parse_double(const std::string& text, const std::string& source, std::size_t line,
                    const std::string& column);
std::uint64_t parse_u64(const std::string& text, const std::string& source, std::size_t line,
                        const std::string& column);

}  // namespace sas

#endif
