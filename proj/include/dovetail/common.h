// dovetail/common.h

// Copyright 2026  The dovetail authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOVETAIL_COMMON_H_
#define DOVETAIL_COMMON_H_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dovetail {

// Process exit codes shared by the CLI and the tools.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Bad input data: unreadable files, malformed records, impossible requests.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All region arithmetic runs on integer milliseconds. Seconds appear only at
// the file format boundary.
inline int64_t MsFromSeconds(double seconds) {
  return static_cast<int64_t>(std::llround(seconds * 1000.0));
}

// Renders milliseconds as seconds with exactly three decimals ("1.500").
std::string SecondsFixed3(int64_t ms);

std::string Trim(const std::string& s);
std::vector<std::string> Split(const std::string& s, char delim);
std::vector<std::string> SplitWhitespace(const std::string& s);

// Parses with full-token validation; throws DataError mentioning `what`.
double ParseDouble(const std::string& token, const std::string& what);
int64_t ParseInt(const std::string& token, const std::string& what);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& content);

// FNV-1a, used for stable run directory names derived from configs.
uint64_t Fnv1a64(const void* data, size_t size, uint64_t seed = 0xcbf29ce484222325ull);
std::string HexDigest(uint64_t value);

}  // namespace dovetail

#endif  // DOVETAIL_COMMON_H_
