#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lamatch {

enum class ErrorKind {
  invalid_instance,
  non_laminar,
  not_many_to_one,
  duplicate_arc,
  source_reaches_sink,
  too_large,
  parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_instance: return "invalid instance";
    case ErrorKind::non_laminar: return "non-laminar classification";
    case ErrorKind::not_many_to_one: return "not a many-to-one instance";
    case ErrorKind::duplicate_arc: return "duplicate arc";
    case ErrorKind::source_reaches_sink: return "source reaches sink";
    case ErrorKind::too_large: return "instance too large";
    case ErrorKind::parse: return "parse error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lamatch
