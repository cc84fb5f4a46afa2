#pragma once

#include <stdexcept>
#include <string>

namespace relsen {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration, topology or hyperparameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data (calibration, stream gaps, non-finite values).
class DataError : public Error {
public:
    using Error::Error;
};

// A process has no usable information source left (zero total weight).
class EstimationError : public Error {
public:
    using Error::Error;
};

// Not enough stored points to form a neighbor set.
class InsufficientHistory : public Error {
public:
    using Error::Error;
};

// Linear system could not be solved.
class SingularSystem : public Error {
public:
    using Error::Error;
};

}  // namespace relsen
