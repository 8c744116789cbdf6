#pragma once

#include <stdexcept>
#include <string>

namespace hofd {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexOutOfRange : Error { using Error::Error; };
struct OutOfSupport : Error { using Error::Error; };
struct InsufficientSample : Error { using Error::Error; };
struct DegenerateGram : Error { using Error::Error; };
struct SolveFailure : Error { using Error::Error; };
struct NonFiniteInput : Error { using Error::Error; };
struct SingularRefit : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct EmptyDictionary : Error { using Error::Error; };
struct ZeroVariance : Error { using Error::Error; };
struct BadCorrelation : Error { using Error::Error; };
struct DependentInputsUnsupported : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct AllReplicatesFailed : Error { using Error::Error; };

}  // namespace hofd
