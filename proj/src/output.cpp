#include "spreadlab/output.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "spreadlab/error.hpp"

namespace spreadlab {

namespace {

// Manifest values live on one line and must survive the '#' comment rule.
std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '#', ' ');
    return text;
}

}  // namespace

bool RunManifest::all_pass() const {
    return errors.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

std::string RunManifest::to_text() const {
    std::ostringstream out;
    out << config_to_text(config);
    out << "[run]\n";
    out << "command = " << one_line(command) << "\n";
    out << "tool_version = " << tool_version << "\n";
    out << "wall_clock_seconds = " << format_double(wall_clock_seconds) << "\n";
    out << "criteria = " << criteria.size() << "\n";
    out << "all_pass = " << (all_pass() ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        out << "error_" << i << " = " << one_line(errors[i]) << "\n";
    }
    for (const auto& c : criteria) {
        out << "[criterion." << c.name << "]\n";
        out << "measured = " << format_double(c.measured) << "\n";
        out << "expected = " << format_double(c.expected) << "\n";
        out << "tolerance = " << format_double(c.tolerance) << "\n";
        out << "pass = " << (c.pass ? "true" : "false") << "\n";
    }
    return out.str();
}

RunManifest parse_manifest(std::string_view text) {
    std::vector<std::string> errors;
    const auto doc = parse_ini(text, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    RunManifest m;
    m.config = config_from_manifest(text);
    const auto number = [](const IniSection& s, const char* key) {
        const auto* e = s.find(key);
        const auto v = e ? parse_double(e->value) : std::nullopt;
        if (!v) throw InvalidArgument("manifest [" + s.name + "] lacks numeric '" + key + "'");
        return *v;
    };
    const auto* run = doc.find("run");
    if (!run) throw InvalidArgument("manifest has no [run] section");
    if (const auto* e = run->find("command")) m.command = e->value;
    if (const auto* e = run->find("tool_version")) m.tool_version = e->value;
    m.wall_clock_seconds = number(*run, "wall_clock_seconds");
    for (const auto& e : run->entries) {
        if (e.key.rfind("error_", 0) == 0) m.errors.push_back(e.value);
    }
    std::set<std::string> names;
    for (const auto& s : doc.sections) {
        if (s.name.rfind("criterion.", 0) != 0) continue;
        CriterionResult c;
        c.name = s.name.substr(10);
        if (!names.insert(c.name).second) {
            throw InvalidArgument("manifest lists criterion '" + c.name + "' twice");
        }
        c.measured = number(s, "measured");
        c.expected = number(s, "expected");
        c.tolerance = number(s, "tolerance");
        const auto* pass = s.find("pass");
        if (!pass || (pass->value != "true" && pass->value != "false")) {
            throw InvalidArgument("manifest criterion '" + c.name + "' lacks pass = true|false");
        }
        c.pass = pass->value == "true";
        m.criteria.push_back(c);
    }
    return m;
}

void write_outputs(const std::filesystem::path& dir,
                   const std::vector<std::pair<std::string, CsvTable>>& tables,
                   const RunManifest& manifest) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create run directory '" + dir.string() + "': " + ec.message());
    for (const auto& [name, table] : tables) write_text_file(dir / name, table.to_string());
    write_text_file(dir / "manifest.txt", manifest.to_text());
}

}  // namespace spreadlab
