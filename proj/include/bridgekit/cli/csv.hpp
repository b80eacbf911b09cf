#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace bridgekit::cli {

/// Comma separated, '.' decimal point, numbers in round-trip precision.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    /// Raw cells, already formatted.
    void row(const std::vector<std::string>& cells);

    static std::string number(double v);

private:
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column; throws InputError if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace bridgekit::cli
