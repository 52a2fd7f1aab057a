// CSV output with self-describing comment headers.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "spinmech/types.hpp"

namespace spinmech {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& comments,
              const std::vector<std::string>& columns)
        : out_(path)
    {
        if (!out_) throw ConfigError("cannot open output file '" + path + "'");
        for (const auto& c : comments) out_ << "# " << c << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values)
    {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }

    void raw_row(const std::string& line) { out_ << line << "\n"; }

private:
    std::ofstream out_;
};

inline std::string join_csv(const std::vector<double>& values)
{
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        line += format_double(values[i]);
        if (i + 1 < values.size()) line += ",";
    }
    return line;
}

} // namespace spinmech
