#pragma once

#include <map>
#include <string>
#include <vector>

namespace photonrl {

// Minimal TOML reader covering what the experiment configs need: [section]
// headers, key = value pairs, strings, integers, floats, booleans, and
// (nested) arrays. Comments start with '#'. Duplicate sections or keys are
// errors; so is anything outside this subset.
struct TomlValue {
    enum class Kind { Boolean, Integer, Float, String, Array };

    Kind kind = Kind::Integer;
    bool boolean = false;
    long long integer = 0;
    double real = 0.0;
    std::string text;
    std::vector<TomlValue> array;

    // Typed accessors; `where` names the key in error messages.
    bool as_bool(const std::string& where) const;
    long long as_int(const std::string& where) const;
    double as_double(const std::string& where) const;  // accepts Integer
    const std::string& as_string(const std::string& where) const;
    const std::vector<TomlValue>& as_array(const std::string& where) const;
    std::vector<double> as_double_array(const std::string& where) const;
    std::vector<long long> as_int_array(const std::string& where) const;

    std::string kind_name() const;
};

// section -> key -> value; keys outside any [section] land in section "".
using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

TomlTable parse_toml(const std::string& text, const std::string& source_name = "<config>");
TomlTable parse_toml_file(const std::string& path);

}  // namespace photonrl
