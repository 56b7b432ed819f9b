#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hive {

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double value);

// Minimal RFC 4180 writer. Fields containing commas, quotes or newlines are quoted.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& fields);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
};

std::string csv_escape(const std::string& field);

} // namespace hive
