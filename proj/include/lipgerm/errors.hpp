#pragma once

#include <stdexcept>
#include <string>

namespace lipgerm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define LIPGERM_ERROR(Name)                        \
    struct Name : Error {                          \
        explicit Name(const std::string& w) : Error(w) {} \
    }

LIPGERM_ERROR(TruncationTooShort);
LIPGERM_ERROR(InvalidDirective);
LIPGERM_ERROR(UnknownBranch);
LIPGERM_ERROR(StepBudgetExceeded);
LIPGERM_ERROR(Disconnected);
LIPGERM_ERROR(ZeroResultant);
LIPGERM_ERROR(NotANode);
LIPGERM_ERROR(InvalidMode);
LIPGERM_ERROR(NonPrincipal);
LIPGERM_ERROR(SourceMismatch);
LIPGERM_ERROR(ParseError);
LIPGERM_ERROR(SchemaError);
LIPGERM_ERROR(ValidationError);

#undef LIPGERM_ERROR

}  // namespace lipgerm
