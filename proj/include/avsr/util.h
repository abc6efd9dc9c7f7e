// avsr/util.h

// Copyright 2026  The avsr-gauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef AVSR_UTIL_H_
#define AVSR_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace avsr {

// ---- text and files -------------------------------------------------------

std::string ReadFile(const std::filesystem::path &path);

/// Splits on '\n', dropping a trailing '\r' from each line. A final newline
/// does not produce an empty last line.
std::vector<std::string> SplitLines(std::string_view text);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view data);

std::string_view Trim(std::string_view s);

/// Whitespace split (space, tab, CR, LF).
std::vector<std::string> SplitWhitespace(std::string_view s);

std::vector<std::string> Split(std::string_view s, char sep);

/// Strict numeric parse; the whole (trimmed) string must be consumed.
std::optional<double> ParseDouble(std::string_view s);
std::optional<long long> ParseInt(std::string_view s);

// ---- CSV ------------------------------------------------------------------

/// RFC 4180 field quoting: fields containing ',', '"' or a newline are
/// quoted with embedded quotes doubled.
std::string CsvEscape(std::string_view field);
std::string CsvRow(const std::vector<std::string> &fields);

/// Parses one CSV record (quoted fields supported, no embedded newlines).
std::vector<std::string> ParseCsvLine(std::string_view line);

// ---- numbers --------------------------------------------------------------

/// Rounds half away from zero at `decimals` places and prints with exactly
/// that many decimals. Used for every human-facing table cell.
std::string FormatFixed(double value, int decimals);

/// Shortest representation that round-trips through strtod ("%.17g" trimmed).
std::string FormatExact(double value);

// ---- randomness and parallelism -------------------------------------------

/// SplitMix64 finalizer; derives independent stream seeds from a base seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions from any
/// task are rethrown (the one with the lowest index wins).
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)> &fn);

}  // namespace avsr

#endif  // AVSR_UTIL_H_
