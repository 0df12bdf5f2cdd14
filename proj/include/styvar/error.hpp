#ifndef STYVAR_ERROR_HPP
#define STYVAR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace styvar {

// Error categories map onto CLI exit codes: input -> 2, insufficient -> 3,
// internal -> 4.
enum class ErrorKind { input, insufficient, internal };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error input_error(const std::string& msg) {
  return Error(ErrorKind::input, msg);
}
inline Error insufficient_error(const std::string& msg) {
  return Error(ErrorKind::insufficient, msg);
}
inline Error internal_error(const std::string& msg) {
  return Error(ErrorKind::internal, msg);
}

}  // namespace styvar

#endif
