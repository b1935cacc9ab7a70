// Copyright 2026 The siwsample Authors
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

#ifndef SIW_ERRORS_HPP
#define SIW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace siw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter values: bad dimensions, out-of-range nu/c/M_T,
/// empty inputs, moments that do not exist for the given nu.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Numerical validity failures: NaN weights, non-positive quadratic forms,
/// singular samples where an inverse is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatches between matrix arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace siw

#endif
