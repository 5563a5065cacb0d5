#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnbalancedIndices : Error {
    using Error::Error;
};
struct NotAFunctional : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct VelocityResidue : Error {
    using Error::Error;
};
struct InconsistentTheory : Error {
    using Error::Error;
};
struct SingularW : Error {
    using Error::Error;
};
struct NonlinearMomenta : Error {
    using Error::Error;
};
struct NotCurlForm : Error {
    using Error::Error;
};
struct UnstableStep : Error {
    using Error::Error;
};

struct SyntaxError : Error {
    int line, col;
    SyntaxError(const std::string& what, int line_, int col_)
        : Error(what + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), col(col_) {}
};

} // namespace dirac
