// Copyright 2026 The ReSplit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace resplit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The notebook document is not valid JSON, or not shaped like a notebook.
class MalformedJson : public Error {
 public:
  using Error::Error;
};

/// The notebook declares an nbformat major version other than 4.
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

/// A merge or split plan does not describe the notebook it is applied to.
class StalePlan : public Error {
 public:
  using Error::Error;
};

}  // namespace resplit
