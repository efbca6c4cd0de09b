#pragma once

#include <stdexcept>
#include <string>

namespace lqtrack {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// matrix_numerics
struct NonConvergentError : Error { using Error::Error; };
struct IllConditionedError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct EigenFailureError : Error { using Error::Error; };
struct UnstableError : Error { using Error::Error; };

// model / controllers
struct DimensionError : Error { using Error::Error; };
struct SingularProgramError : Error { using Error::Error; };

// optimizer dynamics / simulator
struct NoStableStepError : Error { using Error::Error; };
struct UnstableStepError : Error { using Error::Error; };
struct BadParamsError : Error { using Error::Error; };

}  // namespace lqtrack
