#pragma once

#include <stdexcept>
#include <string>

namespace encal {

// Base class for every domain error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The (min,+) deconvolution sup_{s>=0}{f(t+s) - g(s)} has no finite value:
// the terminal slope of f exceeds the terminal slope of g.
struct DivergentDeconvolution : Error {
    using Error::Error;
};

// No finite horizontal shift makes g dominate f.
struct UnboundedDistance : Error {
    using Error::Error;
};

// A requested power (or rate) falls outside the range of the power-rate map.
struct NonInvertiblePower : Error {
    using Error::Error;
};

// Traces combined in one node run do not share step and horizon.
struct StepMismatch : Error {
    using Error::Error;
};

// A trace generator specification has out-of-range parameters.
struct InvalidSpec : Error {
    using Error::Error;
};

// An empirical estimate was requested from an empty sample set.
struct EmptySamples : Error {
    using Error::Error;
};

// A simulated generator violates the stochastic envelope it declares.
struct ModelMismatch : Error {
    using Error::Error;
};

// Scenario text could not be parsed; `line` is 1-based.
struct ParseError : Error {
    ParseError(int line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    int line;
};

// Scenario parsed but is inconsistent (unresolved names, class violations, bad ranges).
struct SemanticError : Error {
    using Error::Error;
};

}  // namespace encal
