/*
 * Copyright 2026 The corrupt3d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CORRUPT3D_ERRORS_H_
#define CORRUPT3D_ERRORS_H_

#include <stdexcept>
#include <string>

namespace corrupt3d {

// Base of every error raised by the library. `kind()` is a stable
// machine-readable tag ("MalformedPointFile", "MissingCell", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define CORRUPT3D_DEFINE_ERROR(Name)                               \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// Violated precondition or type invariant (bad severity, non-finite point).
CORRUPT3D_DEFINE_ERROR(InvalidArgument);
CORRUPT3D_DEFINE_ERROR(MissingEgoPose);
CORRUPT3D_DEFINE_ERROR(DegenerateControlPoints);
CORRUPT3D_DEFINE_ERROR(MalformedPointFile);
CORRUPT3D_DEFINE_ERROR(MalformedLabel);
CORRUPT3D_DEFINE_ERROR(MalformedCalib);
CORRUPT3D_DEFINE_ERROR(MalformedImage);
CORRUPT3D_DEFINE_ERROR(IncompleteFrame);
CORRUPT3D_DEFINE_ERROR(IoError);
CORRUPT3D_DEFINE_ERROR(MissingCell);
CORRUPT3D_DEFINE_ERROR(ZeroCleanAP);
CORRUPT3D_DEFINE_ERROR(ConfigError);

#undef CORRUPT3D_DEFINE_ERROR

}  // namespace corrupt3d

#endif  // CORRUPT3D_ERRORS_H_
