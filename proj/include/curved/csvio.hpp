#ifndef CURVED_CSVIO_HPP
#define CURVED_CSVIO_HPP

#include <string>
#include <vector>

namespace curved {

/// Shortest decimal representation that round-trips to the same double;
/// deterministic, so identical runs produce byte-identical files.
std::string format_double(double v);

double parse_double(const std::string& s); // throws std::invalid_argument

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

} // namespace curved

#endif
