#include "aisched/error.hpp"

namespace aisched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MissingOperations: return "MissingOperations";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::BadMachineIndex: return "BadMachineIndex";
    case ErrorCode::BadDuration: return "BadDuration";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::UnknownMachine: return "UnknownMachine";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::AntibodyTooLong: return "AntibodyTooLong";
    case ErrorCode::EmptyAntibodySet: return "EmptyAntibodySet";
    case ErrorCode::MalformedSymbols: return "MalformedSymbols";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::MismatchedParents: return "MismatchedParents";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::EmptyUniverse: return "EmptyUniverse";
    case ErrorCode::NeedAtLeastTwo: return "NeedAtLeastTwo";
    case ErrorCode::MachineCountMismatch: return "MachineCountMismatch";
    case ErrorCode::InfeasibleSchedule: return "InfeasibleSchedule";
    case ErrorCode::FileError: return "FileError";
  }
  return "Unknown";
}

}  // namespace aisched
