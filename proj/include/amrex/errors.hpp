#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amrex {

// Base of every domain failure. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed Penman text. `offset` is the byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// An AmrGraph invariant does not hold.
class GraphError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Bad numeric argument (lambda out of range, zero-norm vector, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration, e.g. two backends disagreeing on dimension.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The text is absent from every configured embedding source.
class EmbeddingMiss : public Error {
 public:
  explicit EmbeddingMiss(std::string text)
      : Error("no embedding for text: \"" + text + "\""), text_(std::move(text)) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// Network failure, non-200 status, or a malformed service response.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Dataset content problems: unknown labels, missing evidence, missing AMRs.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace amrex
