#ifndef PERIODS_ERRORS_HPP
#define PERIODS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace periods {

// Every failure mode of the engine maps to one of these. They carry a plain
// message with enough provenance (example, interval, operation) to locate the
// failing step from the CLI.
struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& m) : std::runtime_error(m) {}
};

#define PERIODS_DEFINE_ERROR(Name)                                  \
    struct Name : EngineError {                                     \
        explicit Name(const std::string& m) : EngineError(#Name ": " + m) {} \
    }

PERIODS_DEFINE_ERROR(CenterMismatch);
PERIODS_DEFINE_ERROR(InvalidParameter);
PERIODS_DEFINE_ERROR(BranchPointAtCenter);
PERIODS_DEFINE_ERROR(NonSemistablePoint);
PERIODS_DEFINE_ERROR(SingularFiberPoint);
PERIODS_DEFINE_ERROR(InvalidSeedCenter);
PERIODS_DEFINE_ERROR(NoODEFound);
PERIODS_DEFINE_ERROR(NotRegularSingular);
PERIODS_DEFINE_ERROR(SingularExpansionPoint);
PERIODS_DEFINE_ERROR(NotAdjacent);
PERIODS_DEFINE_ERROR(PrecisionExhausted);
PERIODS_DEFINE_ERROR(ConsistencyFailure);
PERIODS_DEFINE_ERROR(NotLocalModel);
PERIODS_DEFINE_ERROR(OutsideSchoenHypotheses);
PERIODS_DEFINE_ERROR(NotASublattice);
PERIODS_DEFINE_ERROR(InvalidMobius);
PERIODS_DEFINE_ERROR(InputError);

#undef PERIODS_DEFINE_ERROR

} // namespace periods

#endif
