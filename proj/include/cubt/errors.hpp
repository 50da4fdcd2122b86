#pragma once

#include <stdexcept>
#include <string>

namespace cubt {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyDataset : Error { using Error::Error; };
struct EmptyNode : Error { using Error::Error; };
struct SingletonNode : Error { using Error::Error; };
struct OverlapError : Error { using Error::Error; };
struct StageError : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };
struct KOutOfRange : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct EmptyLabels : Error { using Error::Error; };
struct EmptyTable : Error { using Error::Error; };
struct UnknownModel : Error { using Error::Error; };
struct BadSigma : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct InvalidParam : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace cubt
