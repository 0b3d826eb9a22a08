#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace prose2poem {

// Base class of every error raised by the engine. A pipeline stage that lets
// an error escape tags it with its name, so callers can report where a
// translation failed without losing the concrete error type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message)
      : std::runtime_error(message), message_(message), what_(message) {}

  const char* what() const noexcept override { return what_.c_str(); }

  const std::string& message() const { return message_; }
  const std::string& stage() const { return stage_; }

  void set_stage(std::string stage) {
    stage_ = std::move(stage);
    what_ = stage_ + ": " + message_;
  }

 private:
  std::string message_;
  std::string stage_;
  std::string what_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input data is malformed or inconsistent (bad JSON, truncated artifact,
// artifacts built from different corpora, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& detail)
      : DataError(source + ":" + std::to_string(line) + ": " + detail), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyCorpusError : public DataError {
 public:
  using DataError::DataError;
};

class MissingWordError : public Error {
 public:
  explicit MissingWordError(const std::string& word)
      : Error("word not in vocabulary: " + word), word_(word) {}

  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

// A requested structure cannot be built from the available material
// (not enough keyword indices, candidates or couplets).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class NoMaskError : public Error {
 public:
  NoMaskError() : Error("sequence contains no mask token") {}
};

// Remote predictor could not be reached or timed out.
class TransportError : public Error {
 public:
  TransportError(const std::string& detail, int attempts)
      : Error(detail + " (after " + std::to_string(attempts) + " attempt" +
              (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts) {}

  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// Remote predictor answered with something that violates the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Remote predictor answered with a non-200 status.
class HttpStatusError : public Error {
 public:
  enum class Kind { bad_request, no_mask, model_unavailable, other };

  HttpStatusError(int status, const std::string& body)
      : Error("remote predictor returned HTTP " + std::to_string(status) +
              (body.empty() ? std::string() : ": " + body)),
        status_(status) {}

  int status() const { return status_; }

  Kind kind() const {
    switch (status_) {
      case 400: return Kind::bad_request;
      case 422: return Kind::no_mask;
      case 503: return Kind::model_unavailable;
      default: return Kind::other;
    }
  }

 private:
  int status_;
};

}  // namespace prose2poem
