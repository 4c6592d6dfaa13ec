// Copyright 2026 The lexirec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXIREC_ERROR_HPP
#define LEXIREC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexirec {

// Base class for everything the library can refuse to do.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Structurally valid input whose content violates a declared constraint
// (rating outside scale, duplicate pair, unknown id, bad magic, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss. Carries the offending epoch.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, int epoch)
        : Error(message), epoch_(epoch) {}

    int epoch() const { return epoch_; }

private:
    int epoch_;
};

}  // namespace lexirec

#endif  // LEXIREC_ERROR_HPP
