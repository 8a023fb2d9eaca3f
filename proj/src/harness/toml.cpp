#include "photonrl/harness/toml.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace photonrl {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& message) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + message);
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    const std::string& source;
    int line;

    bool eol() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() { return text[pos++]; }

    void skip_space() {
        while (!eol() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
};

TomlValue parse_value(Cursor& c);

TomlValue parse_string(Cursor& c) {
    c.take();  // opening quote
    TomlValue v;
    v.kind = TomlValue::Kind::String;
    while (true) {
        if (c.eol()) fail(c.source, c.line, "unterminated string");
        char ch = c.take();
        if (ch == '"') break;
        if (ch == '\\') {
            if (c.eol()) fail(c.source, c.line, "dangling escape in string");
            char esc = c.take();
            switch (esc) {
                case '"': v.text += '"'; break;
                case '\\': v.text += '\\'; break;
                case 'n': v.text += '\n'; break;
                case 't': v.text += '\t'; break;
                default: fail(c.source, c.line, std::string("unsupported escape \\") + esc);
            }
        } else {
            v.text += ch;
        }
    }
    return v;
}

TomlValue parse_array(Cursor& c) {
    c.take();  // '['
    TomlValue v;
    v.kind = TomlValue::Kind::Array;
    c.skip_space();
    if (!c.eol() && c.peek() == ']') {
        c.take();
        return v;
    }
    while (true) {
        c.skip_space();
        v.array.push_back(parse_value(c));
        c.skip_space();
        if (c.eol()) fail(c.source, c.line, "unterminated array (arrays must fit on one line)");
        char ch = c.take();
        if (ch == ']') break;
        if (ch != ',') fail(c.source, c.line, "expected ',' or ']' in array");
    }
    return v;
}

TomlValue parse_scalar(Cursor& c) {
    std::size_t start = c.pos;
    while (!c.eol() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' && c.peek() != ' ' &&
           c.peek() != '\t')
        c.take();
    std::string token = c.text.substr(start, c.pos - start);
    if (token.empty()) fail(c.source, c.line, "expected a value");

    TomlValue v;
    if (token == "true" || token == "false") {
        v.kind = TomlValue::Kind::Boolean;
        v.boolean = (token == "true");
        return v;
    }
    const bool looks_float = token.find_first_of(".eE") != std::string::npos &&
                             token.find_first_not_of("+-0123456789.eE_") == std::string::npos;
    std::string digits = token;
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    char* end = nullptr;
    if (!looks_float) {
        long long i = std::strtoll(digits.c_str(), &end, 10);
        if (end && *end == '\0') {
            v.kind = TomlValue::Kind::Integer;
            v.integer = i;
            return v;
        }
    }
    end = nullptr;
    double d = std::strtod(digits.c_str(), &end);
    if (end && *end == '\0') {
        v.kind = TomlValue::Kind::Float;
        v.real = d;
        return v;
    }
    fail(c.source, c.line, "cannot parse value '" + token + "'");
}

TomlValue parse_value(Cursor& c) {
    c.skip_space();
    if (c.eol()) fail(c.source, c.line, "expected a value");
    char ch = c.peek();
    if (ch == '"') return parse_string(c);
    if (ch == '[') return parse_array(c);
    return parse_scalar(c);
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char ch : key)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') return false;
    return true;
}

}  // namespace

TomlTable parse_toml(const std::string& text, const std::string& source_name) {
    TomlTable table;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        Cursor c{raw, 0, source_name, line_no};
        c.skip_space();
        if (c.eol() || c.peek() == '#') continue;

        if (c.peek() == '[') {
            c.take();
            std::size_t start = c.pos;
            while (!c.eol() && c.peek() != ']') c.take();
            if (c.eol()) fail(source_name, line_no, "unterminated section header");
            section = raw.substr(start, c.pos - start);
            c.take();
            if (!valid_key(section)) fail(source_name, line_no, "invalid section name '" + section + "'");
            if (table.count(section)) fail(source_name, line_no, "duplicate section [" + section + "]");
            table[section];
            c.skip_space();
            if (!c.eol() && c.peek() != '#')
                fail(source_name, line_no, "unexpected text after section header");
            continue;
        }

        std::size_t start = c.pos;
        while (!c.eol() && c.peek() != '=' && c.peek() != ' ' && c.peek() != '\t') c.take();
        std::string key = raw.substr(start, c.pos - start);
        if (!valid_key(key)) fail(source_name, line_no, "invalid key '" + key + "'");
        c.skip_space();
        if (c.eol() || c.take() != '=') fail(source_name, line_no, "expected '=' after key '" + key + "'");
        TomlValue value = parse_value(c);
        c.skip_space();
        if (!c.eol() && c.peek() != '#')
            fail(source_name, line_no, "unexpected trailing text after value of '" + key + "'");
        auto [it, inserted] = table[section].emplace(key, std::move(value));
        (void)it;
        if (!inserted) fail(source_name, line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    return table;
}

TomlTable parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str(), path);
}

std::string TomlValue::kind_name() const {
    switch (kind) {
        case Kind::Boolean: return "boolean";
        case Kind::Integer: return "integer";
        case Kind::Float: return "float";
        case Kind::String: return "string";
        case Kind::Array: return "array";
    }
    return "?";
}

bool TomlValue::as_bool(const std::string& where) const {
    if (kind != Kind::Boolean)
        throw std::runtime_error("config: '" + where + "' must be a boolean, got " + kind_name());
    return boolean;
}

long long TomlValue::as_int(const std::string& where) const {
    if (kind != Kind::Integer)
        throw std::runtime_error("config: '" + where + "' must be an integer, got " + kind_name());
    return integer;
}

double TomlValue::as_double(const std::string& where) const {
    if (kind == Kind::Integer) return static_cast<double>(integer);
    if (kind != Kind::Float)
        throw std::runtime_error("config: '" + where + "' must be a number, got " + kind_name());
    return real;
}

const std::string& TomlValue::as_string(const std::string& where) const {
    if (kind != Kind::String)
        throw std::runtime_error("config: '" + where + "' must be a string, got " + kind_name());
    return text;
}

const std::vector<TomlValue>& TomlValue::as_array(const std::string& where) const {
    if (kind != Kind::Array)
        throw std::runtime_error("config: '" + where + "' must be an array, got " + kind_name());
    return array;
}

std::vector<double> TomlValue::as_double_array(const std::string& where) const {
    std::vector<double> out;
    for (const TomlValue& v : as_array(where)) out.push_back(v.as_double(where + "[]"));
    return out;
}

std::vector<long long> TomlValue::as_int_array(const std::string& where) const {
    std::vector<long long> out;
    for (const TomlValue& v : as_array(where)) out.push_back(v.as_int(where + "[]"));
    return out;
}

}  // namespace photonrl
