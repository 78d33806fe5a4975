// Failure taxonomy for geometric and algebraic operations.  Callers that
// sample configurations catch the recoverable kinds (SampleRejected,
// BadTransversal) and retry; the rest indicate unusable input data.
#pragma once

#include <stdexcept>
#include <string>

namespace moduli {

struct ModuliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define MODULI_ERROR(NAME)                        \
    struct NAME : ModuliError {                   \
        explicit NAME(const std::string& m)       \
            : ModuliError(#NAME ": " + m) {}      \
    }

MODULI_ERROR(NotCollinear);
MODULI_ERROR(MissingLine);
MODULI_ERROR(DegenerateTriangle);
MODULI_ERROR(BadTransversal);
MODULI_ERROR(EqualPoints);
MODULI_ERROR(EqualLines);
MODULI_ERROR(DegenerateFrame);
MODULI_ERROR(PivotUncertifiable);
MODULI_ERROR(SampleRejected);
MODULI_ERROR(NonGenericData);
MODULI_ERROR(PatternMismatch);
MODULI_ERROR(ConstantNonvanishing);

#undef MODULI_ERROR

}  // namespace moduli
