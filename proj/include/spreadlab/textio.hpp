#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace spreadlab {

/// Shortest-unambiguous decimal text is not required; we always emit 17
/// significant digits so that doubles round-trip losslessly.
std::string format_double(double value);

/// Strict decimal parse: whole string must be consumed and the result finite.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

/// One `key = value` entry together with the line it came from.
struct IniEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct IniSection {
    std::string name;
    std::vector<IniEntry> entries;

    const IniEntry* find(std::string_view key) const;
};

/// Flat `key = value` text with `[section]` headers and `#` comments.
/// Entries before the first header belong to a section with an empty name.
struct IniDocument {
    std::vector<IniSection> sections;

    const IniSection* find(std::string_view name) const;
};

/// Reader shared by run configs and run manifests. Malformed lines are
/// reported (all of them) through `errors`; parsing continues past them.
IniDocument parse_ini(std::string_view text, std::vector<std::string>& errors);

using CsvCell = std::variant<double, std::string>;

/// CSV table with a header row. Numeric cells are printed with 17
/// significant digits, text cells verbatim.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    std::string to_string() const;
};

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace spreadlab
