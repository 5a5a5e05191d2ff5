// Copyright 2026 The ASTE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASTE_LOGGING_H_
#define ASTE_LOGGING_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aste {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Reads ASTE_LOG (error|warn|info|debug|off); defaults to info.
LogLevel LogThreshold();
void SetLogThreshold(LogLevel level);
void DisableLogging();

using LogFields = std::vector<std::pair<std::string, std::string>>;

// Writes one "ts=... level=... stage=... key=value ..." line to stderr.
// Values containing spaces, quotes or '=' are double-quoted.
void Log(LogLevel level, std::string_view stage, const LogFields& fields);

std::string FormatLogLine(LogLevel level, std::string_view stage,
                          const LogFields& fields);

}  // namespace aste

#endif  // ASTE_LOGGING_H_
