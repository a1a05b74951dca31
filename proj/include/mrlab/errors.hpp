// Copyright 2026 The mrlab Authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mrlab {

/// Sequence indices are 1-based throughout, matching the sequence-space
/// conventions (e_1, e_2, ...). Storage offsets are 0-based.
using Index = std::int64_t;
using Complex = std::complex<double>;

/// A numeric argument outside its admissible range (exponent, size, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension or support mismatch between a vector and the space it is used in.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A value that cannot be represented in double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// A spectral parameter that coincides with an eigenvalue.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mrlab
