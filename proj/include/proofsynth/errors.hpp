#pragma once

#include <stdexcept>
#include <string>

namespace proofsynth {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// input text could not be parsed as a proposition/term/path
struct ParseError : Error {
    using Error::Error;
};

// fill() addressed a hole id that is not present
struct NoSuchHole : Error {
    using Error::Error;
};

// a path does not address a node of the given term
struct BadPath : Error {
    using Error::Error;
};

// rule_at() landed on a hole, which carries no inference rule
struct HoleAtPath : Error {
    using Error::Error;
};

// annotate()/bound_vars_at() on a term that does not typecheck
struct IllTyped : Error {
    using Error::Error;
};

// random proof generation exhausted its restart budget
struct GiveUp : Error {
    using Error::Error;
};

// training produced a NaN/inf loss
struct NonfiniteLoss : Error {
    using Error::Error;
};

// file could not be read/written
struct IoError : Error {
    using Error::Error;
};

// checkpoint magic/version/shape does not match what the reader expects
struct FormatMismatch : Error {
    using Error::Error;
};

// an internal invariant failed; CLI maps this to exit code 3
struct InternalError : Error {
    using Error::Error;
};

}  // namespace proofsynth
