#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aisched {

enum class ErrorCode {
  // instance / scenario / schedule
  MalformedHeader,
  MissingOperations,
  MalformedLine,
  BadMachineIndex,
  BadDuration,
  InvalidSize,
  UnknownJob,
  UnknownMachine,
  InvalidScenario,
  BadPermutation,
  // matching
  OffsetOutOfRange,
  AntibodyTooLong,
  EmptyAntibodySet,
  MalformedSymbols,
  // gene libraries
  InvalidShape,
  IndexOutOfRange,
  Overflow,
  // genetic algorithm
  MismatchedParents,
  EmptyPopulation,
  InvalidConfig,
  // immune system
  EmptySample,
  EmptyUniverse,
  // harness
  NeedAtLeastTwo,
  MachineCountMismatch,
  InfeasibleSchedule,
  FileError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind of failure, not the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aisched
