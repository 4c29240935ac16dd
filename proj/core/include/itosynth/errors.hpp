#pragma once

#include <stdexcept>
#include <string>

namespace itosynth {

/// Invalid argument to an operation (non-positive step, empty band, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A measure, jump function or model file that violates its contract.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sampler exhausted its retry budget.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateGridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Clock integral overflowed on a path (speed measure too singular at 0).
class ClockOverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SynthesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Local-time horizon too short to cover the requested real time.
class HorizonError : public SynthesisError {
public:
    using SynthesisError::SynthesisError;
};

/// Scaling regime not certified for the given boundary triple.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace itosynth
