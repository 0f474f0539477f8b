#pragma once

// Experiment configuration: a small TOML subset.
//
//   # comment
//   key = 1.5 | 3 | "text" | true | [1, 2] | [[0.0, 0.1, 6], [0.9, 1.0, 6]]
//   [table]
//   [[array_of_tables]]
//
// Keys are bare words; values fit on one line.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace igahelm::config {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<double, bool, std::string, Array> data;
    int line = 0;

    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
};

struct Table {
    std::map<std::string, Value> entries;
    int line = 0;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    const Value* find(const std::string& key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct Document {
    Table root;
    std::map<std::string, Table> tables;
    std::map<std::string, std::vector<Table>> table_arrays;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string_view strip_comment(std::string_view s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

class ValueParser {
public:
    ValueParser(std::string_view text, int line) : s_(text), line_(line) {}

    Value parse_all() {
        Value v = parse();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    Value parse() {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') {
            const auto end = s_.find('"', pos_ + 1);
            if (end == std::string_view::npos) fail("unterminated string");
            Value v{std::string(s_.substr(pos_ + 1, end - pos_ - 1)), line_};
            pos_ = end + 1;
            return v;
        }
        if (c == '[') {
            ++pos_;
            Array arr;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ']') {
                ++pos_;
                return {arr, line_};
            }
            for (;;) {
                arr.push_back(parse());
                skip_ws();
                if (pos_ >= s_.size()) fail("unterminated array");
                if (s_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                    if (pos_ < s_.size() && s_[pos_] == ']') {
                        ++pos_;
                        break;
                    }
                    continue;
                }
                if (s_[pos_] == ']') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ']' in array");
            }
            return {arr, line_};
        }
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return {true, line_};
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return {false, line_};
        }
        std::size_t end = pos_;
        while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && s_[end] != ' ' && s_[end] != '\t') ++end;
        const std::string_view tok = s_.substr(pos_, end - pos_);
        double d = 0.0;
        const char* first = tok.data();
        if (!tok.empty() && tok.front() == '+') ++first;
        const auto res = std::from_chars(first, tok.data() + tok.size(), d);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            fail("invalid value '" + std::string(tok) + "'");
        pos_ = end;
        return {d, line_};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

} // namespace detail

inline Document parse(std::istream& is) {
    Document doc;
    Table* current = &doc.root;
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        if (line.starts_with("[[")) {
            if (!line.ends_with("]]")) throw ParseError("malformed table-array header", lineno);
            const std::string name(detail::trim(line.substr(2, line.size() - 4)));
            auto& arr = doc.table_arrays[name];
            arr.push_back(Table{{}, lineno});
            current = &arr.back();
            continue;
        }
        if (line.starts_with("[")) {
            if (!line.ends_with("]")) throw ParseError("malformed table header", lineno);
            const std::string name(detail::trim(line.substr(1, line.size() - 2)));
            if (doc.tables.count(name)) throw ParseError("duplicate table [" + name + "]", lineno);
            current = &doc.tables[name];
            current->line = lineno;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
        const std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty()) throw ParseError("empty key", lineno);
        if (current->has(key)) throw ParseError("duplicate key '" + key + "'", lineno);
        current->entries[key] = detail::ValueParser(detail::trim(line.substr(eq + 1)), lineno).parse_all();
    }
    return doc;
}

inline Document parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config " + path.string());
    return parse(is);
}

inline Document parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
}

} // namespace igahelm::config
