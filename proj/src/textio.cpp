#include "spreadlab/textio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spreadlab/error.hpp"

namespace spreadlab {

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string_view trim(std::string_view text) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    return text;
}

const IniEntry* IniSection::find(std::string_view key) const {
    for (const auto& entry : entries) {
        if (entry.key == key) return &entry;
    }
    return nullptr;
}

const IniSection* IniDocument::find(std::string_view name) const {
    for (const auto& section : sections) {
        if (section.name == name) return &section;
    }
    return nullptr;
}

IniDocument parse_ini(std::string_view text, std::vector<std::string>& errors) {
    IniDocument doc;
    doc.sections.push_back({});
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                errors.push_back("line " + std::to_string(line_number) + ": malformed section header");
            } else {
                doc.sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), {}});
            }
        } else if (const auto eq = line.find('='); eq == std::string_view::npos) {
            errors.push_back("line " + std::to_string(line_number) + ": expected 'key = value'");
        } else {
            const auto key = trim(line.substr(0, eq));
            if (key.empty()) {
                errors.push_back("line " + std::to_string(line_number) + ": empty key");
            } else {
                doc.sections.back().entries.push_back(
                    {std::string(key), std::string(trim(line.substr(eq + 1))), line_number});
            }
        }
        if (end == text.size()) break;
    }
    if (doc.sections.front().entries.empty()) doc.sections.erase(doc.sections.begin());
    return doc;
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "");
            if (const auto* v = std::get_if<double>(&row[i])) {
                out << format_double(*v);
            } else {
                out << std::get<std::string>(row[i]);
            }
        }
        out << '\n';
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace spreadlab
