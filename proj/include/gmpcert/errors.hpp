// Copyright 2026 The gmpcert Authors
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

namespace gmpcert {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class NonDifferentiable : public Error {
 public:
  using Error::Error;
};

/// Root bracket does not satisfy the sign precondition of bisection.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Thrown by a solver when the bracket it built from the theory fails the
/// sign check. Seeing this means the solver (not the caller) is wrong.
class RootBracketError : public BracketError {
 public:
  using BracketError::BracketError;
};

class ExpansionError : public Error {
 public:
  using Error::Error;
};

/// Moment parameters describe an empty (or single-point) ambiguity set.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Input would overflow IEEE double arithmetic.
class RangeError : public Error {
 public:
  using Error::Error;
};

class FamilyParamError : public Error {
 public:
  using Error::Error;
};

class BranchError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

}  // namespace gmpcert
