#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burden/types.hpp"

namespace burden {

// Flat key-value manifest reader (TOML syntax subset: comments, [sections],
// strings, numbers and numeric arrays — all the manifest needs).
class ManifestFile {
  public:
    static ManifestFile read_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw ParseError("cannot open " + path);
        ManifestFile m;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#')
                continue;
            if (s.front() == '[' && s.back() == ']') {
                section = strip(s.substr(1, s.size() - 2));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": expected key = value");
            std::string key = strip(s.substr(0, eq));
            std::string val = strip(s.substr(eq + 1));
            if (auto h = val.find(" #"); h != std::string::npos && val[0] != '"')
                val = strip(val.substr(0, h));
            if (!section.empty())
                key = section + "." + key;
            m.values_[key] = val;
        }
        return m;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string text(const std::string& key) const {
        const std::string& raw = require(key);
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
            return raw.substr(1, raw.size() - 2);
        return raw;
    }

    double number(const std::string& key) const { return to_number(key, require(key)); }

    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key))
            return std::nullopt;
        return number(key);
    }

    std::vector<double> number_array(const std::string& key) const {
        std::string raw = require(key);
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            throw ParseError("manifest key '" + key + "': expected array");
        std::vector<double> out;
        std::string body = raw.substr(1, raw.size() - 2);
        std::size_t pos = 0;
        while (pos < body.size()) {
            auto comma = body.find(',', pos);
            std::string item = strip(body.substr(pos, comma - pos));
            if (!item.empty())
                out.push_back(to_number(key, item));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        return out;
    }

  private:
    const std::string& require(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ParseError("manifest: missing key '" + key + "'");
        return it->second;
    }
    static double to_number(const std::string& key, const std::string& s) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ParseError("manifest key '" + key + "': unparseable number '" + s + "'");
        return v;
    }
    static std::string strip(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return "";
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

} // namespace burden
