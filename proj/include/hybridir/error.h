// Copyright 2026 The hybridir Authors.
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

#ifndef HYBRIDIR_ERROR_H_
#define HYBRIDIR_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridir {

// Broad failure categories. The command-line tool maps each one to a
// distinct process exit code.
enum class ErrorCode {
  kInvalidArgument,  // bad parameter or flag value
  kNotFound,         // missing input file or unknown id
  kFormat,           // malformed input record or incompatible file
  kInvariant,        // internal consistency check failed
  kIo,               // write failure
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error InvalidArgument(const std::string& message) {
  return Error(ErrorCode::kInvalidArgument, message);
}
inline Error NotFound(const std::string& message) {
  return Error(ErrorCode::kNotFound, message);
}
inline Error FormatError(const std::string& message) {
  return Error(ErrorCode::kFormat, message);
}
inline Error InvariantError(const std::string& message) {
  return Error(ErrorCode::kInvariant, message);
}
inline Error IoError(const std::string& message) {
  return Error(ErrorCode::kIo, message);
}

}  // namespace hybridir

#endif  // HYBRIDIR_ERROR_H_
