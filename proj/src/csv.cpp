#include "sas/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sas/errors.hpp"

namespace sas {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw data_error(source + ": missing column '" + name + "'");
}

CsvTable read_csv(std::istream& in, const std::string& source_name) {
  CsvTable table;
  table.source = source_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_fields(t);
    if (table.columns.empty()) {
      table.columns = std::move(fields);
      continue;
    }
    if (fields.size() != table.columns.size())
      throw data_error(source_name + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.columns.size()) + " fields, got " +
                       std::to_string(fields.size()));
    table.rows.push_back({line_no, std::move(fields)});
  }
  if (table.columns.empty()) throw data_error(source_name + ": no header row");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  return read_csv(in, path.filename().string());
}

double parse_double(const std::string& text, const std::string& source, std::size_t line,
                    const std::string& column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw data_error(source + ":" + std::to_string(line) + ": bad numeric value '" + text +
                     "' in column " + column);
  return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& source, std::size_t line,
                        const std::string& column) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw data_error(source + ":" + std::to_string(line) + ": bad integer value '" + text +
                     "' in column " + column);
  return value;
}

}  // namespace sas
