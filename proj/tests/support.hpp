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

#ifndef RADLOC_TESTS_SUPPORT_HPP
#define RADLOC_TESTS_SUPPORT_HPP

#include <filesystem>
#include <string>

namespace testing
{
    inline std::filesystem::path data(const std::string &rel) { return std::filesystem::path(RADLOC_DATA_DIR) / rel; }

    inline std::filesystem::path fixture(const std::string &rel)
    {
        return std::filesystem::path(RADLOC_TEST_DATA_DIR) / rel;
    }

    /// Fresh scratch directory under the system temp dir.
    inline std::filesystem::path scratch(const std::string &name)
    {
        auto p = std::filesystem::temp_directory_path() / ("radloc_test_" + name);
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }
}

#endif
