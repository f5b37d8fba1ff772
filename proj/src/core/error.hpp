/*
 * Copyright 2026 The ltwkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <concepts>
#include <stdexcept>
#include <string>

namespace ltw {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  Io = 3,
  Diverged = 4,
  OutOfRange = 5,
  Internal = 99,
};

/// Every failure raised by the core carries a category that the C API maps
/// onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

/// Builds the message only on failure; use on hot paths.
template <std::invocable Message>
void require(bool cond, Message&& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what());
}

}  // namespace ltw
