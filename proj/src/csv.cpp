#include "dds/csv.hpp"

namespace dds {

bool CsvReader::next(std::vector<std::string>& row) {
  row.clear();
  int c = in_.get();
  if (c == std::istream::traits_type::eof()) return false;

  std::string field;
  bool quoted = false;
  while (true) {
    if (c == std::istream::traits_type::eof()) {
      row.push_back(field);
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(field);
      field.clear();
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      row.push_back(field);
      return true;
    } else {
      field.push_back(ch);
    }
    c = in_.get();
  }
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string csv_join(const std::vector<std::string>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_quote(row[i]);
  }
  return out;
}

}  // namespace dds
