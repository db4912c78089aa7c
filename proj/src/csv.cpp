#include "mzcg/csv.hpp"

#include <fstream>

#include "mzcg/error.hpp"

namespace mzcg {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

void CsvDocument::meta(const std::string& key, const std::string& value) {
    meta_.push_back("# " + key + "=" + value);
}

void CsvDocument::meta_all(const KeyValues& kv) {
    for (const auto& [k, v] : kv) meta(k, v);
}

void CsvDocument::columns(std::vector<std::string> names) { columns_ = std::move(names); }

void CsvDocument::row(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) line += ',';
        line += format_double(values[i]);
    }
    rows_.push_back(std::move(line));
}

std::string CsvDocument::str() const {
    std::string out;
    for (const auto& m : meta_) out += m + "\r\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i > 0) out += ',';
        out += quote(columns_[i]);
    }
    out += "\r\n";
    for (const auto& r : rows_) out += r + "\r\n";
    return out;
}

void CsvDocument::write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const auto text = str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace mzcg
