#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dsg {

/// Base class of every error raised by the simulator library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DSG_DECLARE_ERROR(Name)                                               \
    class Name : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
    }

// graph_core
DSG_DECLARE_ERROR(CapacityExceeded);
DSG_DECLARE_ERROR(DuplicateId);
DSG_DECLARE_ERROR(UnknownId);
DSG_DECLARE_ERROR(UnknownStaticNode);

// stochastic
DSG_DECLARE_ERROR(ZeroRate);
DSG_DECLARE_ERROR(InvalidMean);
DSG_DECLARE_ERROR(InvalidRate);
DSG_DECLARE_ERROR(InvalidProbability);

// agent_fleet
DSG_DECLARE_ERROR(InvalidGeometry);
DSG_DECLARE_ERROR(Unreachable);

// sim_kernel
DSG_DECLARE_ERROR(TimeTravel);
DSG_DECLARE_ERROR(HandlerFailure);

// metrics
DSG_DECLARE_ERROR(EmptyMeasurement);
DSG_DECLARE_ERROR(DegenerateTask);

// scenario_io
DSG_DECLARE_ERROR(ParseError);
DSG_DECLARE_ERROR(EmptyNetwork);
DSG_DECLARE_ERROR(NoDepotCandidate);
DSG_DECLARE_ERROR(MalformedXml);

#undef DSG_DECLARE_ERROR

/// Raised when a loaded file violates one or more invariants. Every violation
/// is collected, each prefixed with the path of the offending field.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

} // namespace dsg
