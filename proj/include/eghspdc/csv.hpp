#pragma once

// Plain numeric CSV: one header line, comma separated, no quoting. Numbers
// are written in the shortest decimal form that parses back to the same
// double, so equal data gives byte-identical files.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eghspdc/error.hpp"

namespace eghspdc {

class IoError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

inline void append_number(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw Error("number formatting failed");
    out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

inline double parse_number(std::string_view text, const std::string& where) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ConfigError(where + ": cannot parse '" + std::string(text) + "' as a number");
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] int column(const std::string& name) const {
        for (size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return static_cast<int>(k);
        return -1;
    }
};

/// Buffered writer; the file is written in one piece by close().
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
        for (size_t k = 0; k < header.size(); ++k) {
            if (k) buf_ += ',';
            buf_ += header[k];
        }
        buf_ += '\n';
    }

    void row(std::initializer_list<double> values) {
        if (values.size() != columns_) throw Error("CSV row has the wrong number of columns");
        bool first = true;
        for (double v : values) {
            if (!first) buf_ += ',';
            first = false;
            append_number(buf_, v);
        }
        buf_ += '\n';
    }

    [[nodiscard]] const std::string& text() const { return buf_; }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + path + " for writing");
        out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!out) throw IoError("write to " + path + " failed");
    }

private:
    size_t columns_;
    std::string buf_;
};

inline CsvTable parse_csv(const std::string& text, const std::string& name) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string_view> cells;
        size_t start = 0;
        for (size_t k = 0; k <= s.size(); ++k)
            if (k == s.size() || s[k] == ',') {
                cells.emplace_back(s.data() + start, k - start);
                start = k + 1;
            }
        return cells;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (t.header.empty()) {
            for (auto c : cells) {
                std::string h(c);
                while (!h.empty() && h.front() == ' ') h.erase(h.begin());
                while (!h.empty() && h.back() == ' ') h.pop_back();
                t.header.push_back(h);
            }
            continue;
        }
        const std::string where = name + " line " + std::to_string(lineno);
        if (cells.size() != t.header.size())
            throw ConfigError(where + ": expected " + std::to_string(t.header.size()) + " columns, got " +
                              std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto c : cells) row.push_back(parse_number(c, where));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw ConfigError(name + ": empty CSV file");
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace eghspdc
