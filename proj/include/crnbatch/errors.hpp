#ifndef CRNBATCH_ERRORS_HPP
#define CRNBATCH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crnbatch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CRNBATCH_ERROR(Name)          \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  };

CRNBATCH_ERROR(NotApplicable)
CRNBATCH_ERROR(EmptyCrn)
CRNBATCH_ERROR(NonPositiveRate)
CRNBATCH_ERROR(UnknownToken)
CRNBATCH_ERROR(UnknownSpecies)
CRNBATCH_ERROR(NegativeCount)
CRNBATCH_ERROR(MalformedAssignment)
CRNBATCH_ERROR(ReservedSpeciesName)
CRNBATCH_ERROR(K0TooSmall)
CRNBATCH_ERROR(ZeroPropensity)
CRNBATCH_ERROR(Terminal)
CRNBATCH_ERROR(PopulationTooSmall)
CRNBATCH_ERROR(InvalidParams)
CRNBATCH_ERROR(InsufficientPopulation)
CRNBATCH_ERROR(NoRedMolecules)
CRNBATCH_ERROR(DegenerateRates)
CRNBATCH_ERROR(NumericUnderflow)
CRNBATCH_ERROR(EnvelopeMismatch)
CRNBATCH_ERROR(RejectionLimitExceeded)
CRNBATCH_ERROR(DegenerateBins)

#undef CRNBATCH_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace crnbatch

#endif  // CRNBATCH_ERRORS_HPP
