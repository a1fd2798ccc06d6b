#pragma once

#include <istream>
#include <string>
#include <vector>

namespace dds {

// RFC-4180-style CSV reader: quoted fields, doubled-quote escapes, and
// newlines inside quoted fields. Rows are returned without the trailing
// line terminator; CRLF and LF are both accepted.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads one record into `row`. Returns false at end of input.
  bool next(std::vector<std::string>& row);

 private:
  std::istream& in_;
};

std::string csv_quote(const std::string& field);
std::string csv_join(const std::vector<std::string>& row);

}  // namespace dds
