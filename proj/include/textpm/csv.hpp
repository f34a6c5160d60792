#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace textpm {

/// Minimal RFC-4180 reader: quoted fields, doubled quotes, CRLF, and line
/// breaks inside quotes. A leading UTF-8 BOM is skipped.
class CsvReader {
public:
    explicit CsvReader(std::string_view text);

    /// Reads the next record. Returns false at end of input. `line` receives
    /// the 1-based line on which the record starts.
    bool next(std::vector<std::string>& fields, std::size_t& line);

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

/// Quotes a field if it contains a delimiter, quote, or line break.
std::string csv_escape(std::string_view field);

std::string csv_join(const std::vector<std::string>& fields);

}  // namespace textpm
