#pragma once

#include <stdexcept>
#include <string>

namespace edi {

// Every domain failure carries a stable name so the CLI can report it
// verbatim and tests can match on it.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define EDI_DEFINE_ERROR(Type)                                                 \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what) : Error(#Type, what) {}        \
    }

EDI_DEFINE_ERROR(ParseError);
EDI_DEFINE_ERROR(UnknownAtom);
EDI_DEFINE_ERROR(InvalidVocabulary);
EDI_DEFINE_ERROR(InvalidBeliefState);
EDI_DEFINE_ERROR(InvalidDistance);
EDI_DEFINE_ERROR(InvalidParameter);
EDI_DEFINE_ERROR(ConditioningUndefined);
EDI_DEFINE_ERROR(EmptyEvidence);
EDI_DEFINE_ERROR(DegenerateNormalization);
EDI_DEFINE_ERROR(RejectedWeight);
EDI_DEFINE_ERROR(SuiteTooLarge);
EDI_DEFINE_ERROR(IoError);

#undef EDI_DEFINE_ERROR

} // namespace edi
