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

#ifndef RADLOC_CONFIG_HPP
#define RADLOC_CONFIG_HPP

#include "csv.hpp"
#include "errors.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace radloc
{
    /// key = value text configuration. '#' starts a comment; later keys override earlier ones.
    /// Every lookup is remembered so unknown keys can be reported.
    class Config
    {
    public:
        Config() = default;

        static Config parse(const std::string &text, const std::string &source = "<config>")
        {
            Config c;
            c.source_ = source;
            std::istringstream in(text);
            std::string line;
            int lineno = 0;
            while (std::getline(in, line))
            {
                ++lineno;
                auto hash = line.find('#');
                auto body = csv::trim(std::string_view(line).substr(0, hash));
                if (body.empty())
                    continue;
                const auto eq = body.find('=');
                if (eq == std::string_view::npos)
                    throw ConfigError(source, lineno, "expected 'key = value'");
                const auto key = std::string(csv::trim(body.substr(0, eq)));
                const auto value = std::string(csv::trim(body.substr(eq + 1)));
                if (key.empty())
                    throw ConfigError(source, lineno, "empty key");
                c.entries_[key] = {value, lineno};
            }
            return c;
        }

        static Config load(const std::filesystem::path &path)
        {
            std::ifstream in(path);
            if (!in)
                throw ConfigError(path.string(), 0, "cannot open config file");
            std::stringstream ss;
            ss << in.rdbuf();
            auto c = parse(ss.str(), path.string());
            c.base_dir_ = path.parent_path();
            return c;
        }

        /// Sets or overrides a value (used for command-line overrides).
        void set(const std::string &key, const std::string &value) { entries_[key] = {value, 0}; }

        bool has(const std::string &key) const { return entries_.count(key) != 0; }

        std::optional<std::string> raw(const std::string &key) const
        {
            used_.insert(key);
            auto it = entries_.find(key);
            if (it == entries_.end())
                return std::nullopt;
            return it->second.value;
        }

        std::string get_string(const std::string &key, const std::string &fallback) const
        {
            auto v = raw(key);
            return v ? *v : fallback;
        }

        std::string require_string(const std::string &key) const
        {
            auto v = raw(key);
            if (!v)
                throw ConfigError(source_, 0, "missing required key '" + key + "'");
            return *v;
        }

        double get_double(const std::string &key, double fallback) const
        {
            auto v = raw(key);
            if (!v)
                return fallback;
            return csv::parse_double(*v, source_, line_of(key));
        }

        long get_int(const std::string &key, long fallback) const
        {
            auto v = raw(key);
            if (!v)
                return fallback;
            return csv::parse_int(*v, source_, line_of(key));
        }

        bool get_bool(const std::string &key, bool fallback) const
        {
            auto v = raw(key);
            if (!v)
                return fallback;
            if (*v == "1" || *v == "true" || *v == "yes" || *v == "on")
                return true;
            if (*v == "0" || *v == "false" || *v == "no" || *v == "off")
                return false;
            throw ConfigError(source_, line_of(key), "expected a boolean for '" + key + "'");
        }

        std::vector<double> get_doubles(const std::string &key, const std::vector<double> &fallback) const
        {
            auto v = raw(key);
            if (!v)
                return fallback;
            std::vector<double> out;
            for (const auto &f : csv::split(*v))
                if (!f.empty())
                    out.push_back(csv::parse_double(f, source_, line_of(key)));
            return out;
        }

        std::vector<std::string> get_strings(const std::string &key, const std::vector<std::string> &fallback) const
        {
            auto v = raw(key);
            if (!v)
                return fallback;
            std::vector<std::string> out;
            for (auto &f : csv::split(*v))
                if (!f.empty())
                    out.push_back(f);
            return out;
        }

        /// Resolves a path value relative to the directory of the config file.
        std::filesystem::path get_path(const std::string &key, const std::string &fallback = {}) const
        {
            auto v = raw(key);
            std::filesystem::path p = v ? *v : fallback;
            if (p.empty() || p.is_absolute())
                return p;
            return base_dir_ / p;
        }

        int line_of(const std::string &key) const
        {
            auto it = entries_.find(key);
            return it == entries_.end() ? 0 : it->second.line;
        }

        std::vector<std::string> unused_keys() const
        {
            std::vector<std::string> out;
            for (const auto &[k, _] : entries_)
                if (!used_.count(k))
                    out.push_back(k);
            return out;
        }

        /// Throws on the first key that no reader asked for, which is almost always a typo.
        void reject_unknown() const
        {
            for (const auto &[k, e] : entries_)
                if (!used_.count(k))
                    throw ConfigError(source_, e.line, "unknown key '" + k + "'");
        }

        const std::string &source() const { return source_; }
        const std::filesystem::path &base_dir() const { return base_dir_; }
        void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

    private:
        struct Entry
        {
            std::string value;
            int line = 0;
        };
        std::map<std::string, Entry> entries_;
        mutable std::set<std::string> used_;
        std::string source_ = "<config>";
        std::filesystem::path base_dir_;
    };
}

#endif
