#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "burden/types.hpp"

namespace burden::csv {

// Minimal CSV table: UTF-8, comma separated, dot decimal, mandatory header
// row. Errors carry file, line and column so bad bundle rows are locatable.
class Table {
  public:
    static Table read_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw ParseError("cannot open " + path);
        Table t;
        t.path_ = path;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string f;
            while (std::getline(ss, f, ','))
                fields.push_back(f);
            if (!line.empty() && line.back() == ',')
                fields.emplace_back();
            if (lineno == 1)
                t.header_ = fields;
            else {
                t.rows_.push_back(std::move(fields));
                t.linenos_.push_back(lineno);
            }
        }
        if (t.header_.empty())
            throw ParseError(path + ": missing header row");
        return t;
    }

    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    const std::string& path() const { return path_; }

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header_.size(); ++i)
            if (header_[i] == name)
                return static_cast<int>(i);
        throw ParseError(path_ + ": missing column '" + name + "'");
    }
    std::optional<int> find_column(const std::string& name) const {
        for (std::size_t i = 0; i < header_.size(); ++i)
            if (header_[i] == name)
                return static_cast<int>(i);
        return std::nullopt;
    }

    const std::string& cell(std::size_t row, int col) const {
        static const std::string empty;
        if (col < 0 || static_cast<std::size_t>(col) >= rows_[row].size())
            return empty;
        return rows_[row][static_cast<std::size_t>(col)];
    }
    std::string text(std::size_t row, const std::string& col) const {
        return cell(row, column(col));
    }

    double number(std::size_t row, const std::string& col) const {
        const std::string& s = cell(row, column(col));
        return parse_number(s, row, col);
    }
    std::optional<double> optional_number(std::size_t row, const std::string& col) const {
        auto c = find_column(col);
        if (!c)
            return std::nullopt;
        const std::string& s = cell(row, *c);
        if (s.empty())
            return std::nullopt;
        return parse_number(s, row, col);
    }

    // Fractions on disk are decimals in [0,1]; percent signs are rejected.
    double fraction(std::size_t row, const std::string& col) const {
        const std::string& s = cell(row, column(col));
        if (s.find('%') != std::string::npos)
            throw ParseError(where(row, col) + ": percent values not accepted, use decimals");
        double v = parse_number(s, row, col);
        if (v < 0.0 || v > 1.0)
            throw ParseError(where(row, col) + ": fraction out of [0,1]: " + s);
        return v;
    }

    std::string where(std::size_t row, const std::string& col) const {
        return path_ + ":" + std::to_string(linenos_[row]) + ":" + col;
    }

  private:
    double parse_number(const std::string& s, std::size_t row, const std::string& col) const {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ParseError(where(row, col) + ": unparseable number '" + s + "'");
        return v;
    }

    std::string path_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<int> linenos_;
};

class Writer {
  public:
    explicit Writer(const std::string& path) : out_(path), path_(path) {
        if (!out_)
            throw ParseError("cannot write " + path);
    }
    Writer& row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
        return *this;
    }

  private:
    std::ofstream out_;
    std::string path_;
};

} // namespace burden::csv
