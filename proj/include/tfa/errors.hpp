#pragma once

#include <stdexcept>
#include <string>

namespace tfa {

// Every failure raised by the library derives from tfa::Error and carries a
// stable kind string. The CLI maps kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define TFA_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(tag, what) {}      \
  };

TFA_DEFINE_ERROR(InvalidArgument, "invalid_argument")
TFA_DEFINE_ERROR(SingularityError, "singularity")
TFA_DEFINE_ERROR(ValidationError, "validation")
TFA_DEFINE_ERROR(RangeError, "range")
TFA_DEFINE_ERROR(ResolutionError, "resolution")
TFA_DEFINE_ERROR(TruncationError, "truncation")
TFA_DEFINE_ERROR(PreconditionError, "precondition")
TFA_DEFINE_ERROR(UnsupportedError, "unsupported")
TFA_DEFINE_ERROR(DefinitenessError, "definiteness")
TFA_DEFINE_ERROR(AliasingError, "aliasing")

#undef TFA_DEFINE_ERROR

}  // namespace tfa
