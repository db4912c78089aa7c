#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mzcg/config.hpp"

namespace mzcg {

// In-memory CSV document: '#'-prefixed metadata lines followed by an
// RFC 4180 header row and numeric rows. Numbers use 17 significant digits.
class CsvDocument {
public:
    void meta(const std::string& key, const std::string& value);
    void meta(const std::string& key, double value) { meta(key, format_double(value)); }
    void meta_all(const KeyValues& kv);

    void columns(std::vector<std::string> names);
    void row(std::span<const double> values);

    std::string str() const;
    // Throws IoError when the file cannot be written.
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> meta_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

}  // namespace mzcg
