#ifndef FINFO_ERRORS_HPP
#define FINFO_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace finfo {

// Error families map onto CLI exit codes: usage -> 1, data -> 2, numerical -> 3.
enum class ErrorKind { usage, data, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string type, const std::string& msg)
        : std::runtime_error(msg), kind_(kind), type_(std::move(type)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& type() const noexcept { return type_; }

private:
    ErrorKind kind_;
    std::string type_;
};

#define FINFO_DEFINE_ERROR(NAME, KIND)                                   \
    struct NAME : Error {                                                \
        explicit NAME(const std::string& msg)                            \
            : Error(ErrorKind::KIND, #NAME, msg) {}                      \
    }

FINFO_DEFINE_ERROR(UsageError, usage);

FINFO_DEFINE_ERROR(ZeroMassError, data);
FINFO_DEFINE_ERROR(NegativeDensityError, data);
FINFO_DEFINE_ERROR(NotConfiningError, data);
FINFO_DEFINE_ERROR(SignError, data);
FINFO_DEFINE_ERROR(DegenerateDataError, data);
FINFO_DEFINE_ERROR(NonPositivePriceError, data);
FINFO_DEFINE_ERROR(DomainError, data);
FINFO_DEFINE_ERROR(PreconditionError, data);
FINFO_DEFINE_ERROR(IoError, data);

FINFO_DEFINE_ERROR(NoBoundStateError, numerical);
FINFO_DEFINE_ERROR(GridTooNarrowError, numerical);
FINFO_DEFINE_ERROR(PerturbationInvalidError, numerical);
FINFO_DEFINE_ERROR(ClampMassExceededError, numerical);
FINFO_DEFINE_ERROR(NotConvergedError, numerical);

#undef FINFO_DEFINE_ERROR

} // namespace finfo

#endif
