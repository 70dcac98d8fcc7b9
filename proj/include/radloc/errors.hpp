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

#ifndef RADLOC_ERRORS_HPP
#define RADLOC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace radloc
{
    /// Base class of every exception thrown by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class ZeroDisplacement : public Error
    {
    public:
        ZeroDisplacement() : Error("transmitter and receiver positions coincide") {}
    };

    class NonPositivePower : public Error
    {
    public:
        explicit NonPositivePower(double mw)
            : Error("power must be positive to convert to dBm, got " + std::to_string(mw) + " mW") {}
    };

    class NonPositiveDistance : public Error
    {
    public:
        explicit NonPositiveDistance(double d)
            : Error("path loss requires a positive distance, got " + std::to_string(d) + " m") {}
    };

    class EmptyInput : public Error
    {
    public:
        explicit EmptyInput(const std::string &what) : Error(what) {}
    };

    /// Thrown by enrolment when some pattern cells received no sample.
    /// Cells are (azimuthIndex, elevationIndex) pairs.
    class CoverageGap : public Error
    {
    public:
        explicit CoverageGap(std::vector<std::pair<int, int>> cells)
            : Error(std::to_string(cells.size()) + " pattern cell(s) have no samples"), cells_(std::move(cells)) {}
        const std::vector<std::pair<int, int>> &cells() const noexcept { return cells_; }

    private:
        std::vector<std::pair<int, int>> cells_;
    };

    class DegenerateGrid : public Error
    {
    public:
        DegenerateGrid() : Error("radiation intensity grid carries no power") {}
    };

    class IncompleteLattice : public Error
    {
    public:
        explicit IncompleteLattice(const std::string &what) : Error("incomplete survey lattice: " + what) {}
    };

    class UnsortedInput : public Error
    {
    public:
        explicit UnsortedInput(const std::string &what) : Error(what) {}
    };

    class NoUsableReceivers : public Error
    {
    public:
        NoUsableReceivers() : Error("observation has no receiver covered by the candidate grid") {}
    };

    class MisalignedStreams : public Error
    {
    public:
        explicit MisalignedStreams(const std::string &what) : Error(what) {}
    };

    /// Configuration or file-format problem; carries the offending line when known.
    class ConfigError : public Error
    {
    public:
        ConfigError(const std::string &source, int line, const std::string &what)
            : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}
        int line() const noexcept { return line_; }

    private:
        int line_;
    };
}

#endif
