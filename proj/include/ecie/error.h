#ifndef ECIE_ERROR_H_
#define ECIE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ecie {

// Base exception. `code` is a stable, machine-readable identifier such as
// "MENTION_MULTI_CLUSTER"; the what() string is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

// Malformed input text. `byte_offset` is relative to the start of the input.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, std::size_t byte_offset)
      : Error("PARSE_ERROR", message + " at byte " +
                                 std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace ecie

#endif  // ECIE_ERROR_H_
