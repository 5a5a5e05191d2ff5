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

#include "aste/logging.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "fmt/chrono.h"
#include "fmt/format.h"

namespace aste {
namespace {

constexpr int kOff = -1;

std::atomic<int>& Threshold() {
  static std::atomic<int> threshold = [] {
    const char* env = std::getenv("ASTE_LOG");
    const std::string_view v = env ? env : "info";
    if (v == "off" || v == "none") return kOff;
    if (v == "error") return static_cast<int>(LogLevel::kError);
    if (v == "warn") return static_cast<int>(LogLevel::kWarn);
    if (v == "debug") return static_cast<int>(LogLevel::kDebug);
    return static_cast<int>(LogLevel::kInfo);
  }();
  return threshold;
}

std::string_view LevelName(LogLevel level) {
  switch (level) {
    case LogLevel::kError:
      return "error";
    case LogLevel::kWarn:
      return "warn";
    case LogLevel::kInfo:
      return "info";
    case LogLevel::kDebug:
      return "debug";
  }
  return "info";
}

std::string Quote(std::string_view value) {
  if (!value.empty() &&
      value.find_first_of(" \t\n\"=") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

LogLevel LogThreshold() {
  const int t = Threshold().load();
  return t < 0 ? LogLevel::kError : static_cast<LogLevel>(t);
}

void SetLogThreshold(LogLevel level) {
  Threshold().store(static_cast<int>(level));
}

void DisableLogging() { Threshold().store(kOff); }

std::string FormatLogLine(LogLevel level, std::string_view stage,
                          const LogFields& fields) {
  const auto now = std::chrono::floor<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
  std::string line = fmt::format("ts={:%Y-%m-%dT%H:%M:%S}Z level={} stage={}",
                                 now, LevelName(level), Quote(stage));
  for (const auto& [key, value] : fields) {
    line += fmt::format(" {}={}", key, Quote(value));
  }
  return line;
}

void Log(LogLevel level, std::string_view stage, const LogFields& fields) {
  if (static_cast<int>(level) > Threshold().load()) return;
  const std::string line = FormatLogLine(level, stage, fields) + "\n";
  std::fwrite(line.data(), 1, line.size(), stderr);
}

}  // namespace aste
