#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dirac {

// Every error raised by the engine derives from Error, so callers that only
// need a message can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define DIRAC_ERROR(Name)                                                  \
    class Name : public Error {                                            \
    public:                                                                \
        using Error::Error;                                                \
        const char* kind() const noexcept override { return #Name; }       \
    }

DIRAC_ERROR(UnknownSymbol);
DIRAC_ERROR(Inconsistent);
DIRAC_ERROR(NonPolynomial);
DIRAC_ERROR(PatchMismatch);
DIRAC_ERROR(DegreeTooHigh);
DIRAC_ERROR(DegreeZero);
DIRAC_ERROR(NotInverse);
DIRAC_ERROR(NotLagrangian);
DIRAC_ERROR(RankDeficient);
DIRAC_ERROR(WrongShape);
DIRAC_ERROR(NotAlgebroid);
DIRAC_ERROR(RankTooLarge);
DIRAC_ERROR(RankJump);
DIRAC_ERROR(AnchorNotTangent);
DIRAC_ERROR(NotIdeal);
DIRAC_ERROR(NotLie);
DIRAC_ERROR(ChartMismatch);
DIRAC_ERROR(TranslationNotDerivable);
DIRAC_ERROR(NotComposable);
DIRAC_ERROR(UnderdeterminedSpan);
DIRAC_ERROR(NotAGroup);
DIRAC_ERROR(NotMultiplicative);
DIRAC_ERROR(HypothesisFails);
DIRAC_ERROR(UnknownReference);
DIRAC_ERROR(CheckError);

#undef DIRAC_ERROR

// Malformed input text. column is 1-based; line is 0 when the text is a
// single expression rather than a file.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : Error(format(what, line, column)), line_(line), column_(column) {}
    const char* kind() const noexcept override { return "SyntaxError"; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string pos = line ? std::to_string(line) + ":" + std::to_string(column)
                               : "column " + std::to_string(column);
        return pos + ": " + what;
    }
    std::size_t line_;
    std::size_t column_;
};

} // namespace dirac
