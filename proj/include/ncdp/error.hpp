/* Copyright 2026 The ncdp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <stdexcept>
#include <string>

namespace ncdp {

// Base of every error the library raises. what() carries a human-readable
// message; kind() a stable token used by the CLI's structured error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error("domain", m) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& m) : Error("shape", m) {}
};

/// Fewer than k linearly independent rows; the caller should keep gathering.
class InsufficientRank : public Error {
 public:
  InsufficientRank(std::size_t rank, std::size_t needed)
      : Error("insufficient-rank", "rank " + std::to_string(rank) + " < " + std::to_string(needed)),
        rank_(rank) {}
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& m) : Error("integrity", m) {}
};

class EncodeError : public Error {
 public:
  explicit EncodeError(const std::string& m) : Error("encode", m) {}
};

/// Malformed wire image. field() names the header field where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& m)
      : Error("parse", field + ": " + m), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& m) : Error("infeasible", m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

class SetupError : public Error {
 public:
  explicit SetupError(const std::string& m) : Error("setup", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace ncdp
