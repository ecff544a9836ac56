// Copyright 2026 The Slotforge Authors.
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

#ifndef SLOTFORGE_SRC_ERROR_H_
#define SLOTFORGE_SRC_ERROR_H_

#include <stdexcept>
#include <string>

namespace slotforge {

// Values line up with the process exit codes of the command-line tool.
enum class ErrorCode {
  kUsage = 1,
  kData = 2,
  kRemote = 3,
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error usage_error(const std::string& message) {
  return Error(ErrorCode::kUsage, message);
}
inline Error data_error(const std::string& message) {
  return Error(ErrorCode::kData, message);
}
inline Error remote_error(const std::string& message) {
  return Error(ErrorCode::kRemote, message);
}
inline Error io_error(const std::string& message) {
  return Error(ErrorCode::kIo, message);
}

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_ERROR_H_
