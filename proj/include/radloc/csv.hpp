// SPDX-License-Identifier: Apache-2.0
//
// radloc - orientation-aware RSS localisation using device radiation patterns
// Copyright (C) 2026 The radloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RADLOC_CSV_HPP
#define RADLOC_CSV_HPP

#include "errors.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

// Minimal CSV support for the file formats used by the tools: comma separated,
// no quoting, a single header row, '#' comment lines ignored.

namespace radloc::csv
{
    inline std::string_view trim(std::string_view s)
    {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
            s.remove_suffix(1);
        return s;
    }

    inline std::vector<std::string> split(std::string_view line, char sep = ',')
    {
        std::vector<std::string> out;
        size_t start = 0;
        while (true)
        {
            const size_t pos = line.find(sep, start);
            out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        return out;
    }

    inline double parse_double(std::string_view text, const std::string &source, int line)
    {
        text = trim(text);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ConfigError(source, line, "expected a number, got '" + std::string(text) + "'");
        return v;
    }

    inline long parse_int(std::string_view text, const std::string &source, int line)
    {
        text = trim(text);
        long v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ConfigError(source, line, "expected an integer, got '" + std::string(text) + "'");
        return v;
    }

    /// Shortest representation that parses back to the same double.
    inline std::string format(double v)
    {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
    }

    struct Row
    {
        int line = 0;
        std::vector<std::string> fields;
    };

    struct Table
    {
        std::string source;
        std::vector<std::string> header;
        std::vector<Row> rows;

        double number(const Row &row, size_t col) const { return parse_double(row.fields.at(col), source, row.line); }
        long integer(const Row &row, size_t col) const { return parse_int(row.fields.at(col), source, row.line); }
    };

    inline std::string join(const std::vector<std::string> &fields)
    {
        std::string s;
        for (const auto &f : fields)
            s += (s.empty() ? "" : ",") + f;
        return s;
    }

    /// Reads a CSV file and checks that its header matches `expected` exactly.
    inline Table read(const std::filesystem::path &path, const std::vector<std::string> &expected)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError(path.string(), 0, "cannot open file");
        Table t;
        t.source = path.string();
        std::string line;
        int lineno = 0;
        bool have_header = false;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto body = trim(line);
            if (body.empty() || body.front() == '#')
                continue;
            auto fields = split(body);
            if (!have_header)
            {
                if (fields != expected)
                {
                    throw ConfigError(t.source, lineno, "unexpected header, want '" + join(expected) + "'");
                }
                t.header = std::move(fields);
                have_header = true;
                continue;
            }
            if (fields.size() != expected.size())
                throw ConfigError(t.source, lineno, "expected " + std::to_string(expected.size()) + " fields, got " +
                                                        std::to_string(fields.size()));
            t.rows.push_back({lineno, std::move(fields)});
        }
        if (!have_header)
            throw ConfigError(t.source, 0, "missing header row");
        return t;
    }

    /// Writes `content` to `path` through a temporary file and a rename, so readers never see a partial file.
    inline void write_atomic(const std::filesystem::path &path, const std::string &content)
    {
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw ConfigError(tmp.string(), 0, "cannot open file for writing");
            out << content;
            if (!out)
                throw ConfigError(tmp.string(), 0, "write failed");
        }
        std::filesystem::rename(tmp, path);
    }

    /// Small row builder: csv::Line() << a << b produces "a,b".
    class Line
    {
    public:
        Line &operator<<(double v) { return add(format(v)); }
        Line &operator<<(int v) { return add(std::to_string(v)); }
        Line &operator<<(long v) { return add(std::to_string(v)); }
        Line &operator<<(unsigned long v) { return add(std::to_string(v)); }
        Line &operator<<(unsigned v) { return add(std::to_string(v)); }
        Line &operator<<(bool v) { return add(v ? "1" : "0"); }
        Line &operator<<(const std::string &v) { return add(v); }
        Line &operator<<(const char *v) { return add(v); }
        const std::string &str() const { return s_; }

    private:
        Line &add(const std::string &field)
        {
            if (!first_)
                s_ += ',';
            s_ += field;
            first_ = false;
            return *this;
        }
        std::string s_;
        bool first_ = true;
    };
}

#endif
