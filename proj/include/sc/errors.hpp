#pragma once

#include <stdexcept>
#include <string>

namespace sc {

// Base class for all pipeline errors. CLI maps these to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThresholdOutOfRange : Error { using Error::Error; };
struct DimensionMismatch   : Error { using Error::Error; };
struct ImageTooLarge       : Error { using Error::Error; };
struct MalformedStream     : Error { using Error::Error; };
struct EmptyCorpus         : Error { using Error::Error; };
struct DegenerateSystem    : Error { using Error::Error; };
struct MissingAnnotation   : Error { using Error::Error; };
struct UnreadableImage     : Error { using Error::Error; };
struct LengthMismatch      : Error { using Error::Error; };
struct LabelOutOfRange     : Error { using Error::Error; };
struct DivisionByZero      : Error { using Error::Error; };
struct IoError             : Error { using Error::Error; };

}  // namespace sc
