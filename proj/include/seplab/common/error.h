// Copyright 2026 The Seplab Authors
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

#ifndef SEPLAB_COMMON_ERROR_H_
#define SEPLAB_COMMON_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace seplab {

// Error taxonomy. ConfigError maps to exit code 2 in the CLI, everything
// else to 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& msg)
      : std::logic_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class InfeasibleScene : public std::runtime_error {
 public:
  explicit InfeasibleScene(const std::string& msg)
      : std::runtime_error(msg) {}
};

namespace internal {
inline std::string CheckMessage(const char* cond, const char* file, int line,
                                const std::string& extra) {
  std::ostringstream os;
  os << "check failed: " << cond << " (" << file << ":" << line << ")";
  if (!extra.empty()) os << " " << extra;
  return os.str();
}
}  // namespace internal

#define SEPLAB_CHECK(cond)                                                   \
  do {                                                                       \
    if (!(cond))                                                             \
      throw ::seplab::InvariantViolation(::seplab::internal::CheckMessage(   \
          #cond, __FILE__, __LINE__, ""));                                   \
  } while (0)

#define SEPLAB_CHECK_MSG(cond, msg)                                          \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::ostringstream os_;                                                \
      os_ << msg;                                                            \
      throw ::seplab::InvariantViolation(::seplab::internal::CheckMessage(   \
          #cond, __FILE__, __LINE__, os_.str()));                            \
    }                                                                        \
  } while (0)

}  // namespace seplab

#endif  // SEPLAB_COMMON_ERROR_H_
