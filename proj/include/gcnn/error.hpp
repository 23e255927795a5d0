#pragma once

#include <stdexcept>
#include <string>

namespace gcnn {

// Data errors come from malformed or inconsistent inputs; runtime errors come
// from the computation itself. The CLI maps them to exit codes 2 and 3.
enum class ErrorCategory { Data, Runtime };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ErrorCategory category() const noexcept = 0;
    virtual const char* kind() const noexcept = 0;
};

#define GCNN_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
        ErrorCategory category() const noexcept override { return Category; } \
        const char* kind() const noexcept override { return #Name; }        \
    };

// graph-core
GCNN_DEFINE_ERROR(DimensionTooSmall, ErrorCategory::Data)
GCNN_DEFINE_ERROR(ParseError, ErrorCategory::Data)
GCNN_DEFINE_ERROR(InconsistentIndicator, ErrorCategory::Data)
GCNN_DEFINE_ERROR(SchemaVersionMismatch, ErrorCategory::Data)
GCNN_DEFINE_ERROR(InvalidConfig, ErrorCategory::Data)

// graphlet-exact
GCNN_DEFINE_ERROR(Disconnected, ErrorCategory::Data)
GCNN_DEFINE_ERROR(UnknownPattern, ErrorCategory::Data)
GCNN_DEFINE_ERROR(NotAnEdge, ErrorCategory::Data)

// graphlet-sample
GCNN_DEFINE_ERROR(NoEdges, ErrorCategory::Data)
GCNN_DEFINE_ERROR(NoSeedGraphlet, ErrorCategory::Data)
GCNN_DEFINE_ERROR(ZeroAnchorFrequency, ErrorCategory::Runtime)

// neural
GCNN_DEFINE_ERROR(ShapeMismatch, ErrorCategory::Data)
GCNN_DEFINE_ERROR(NonFiniteValue, ErrorCategory::Runtime)
GCNN_DEFINE_ERROR(NonFiniteGradient, ErrorCategory::Runtime)
GCNN_DEFINE_ERROR(EmptyBatch, ErrorCategory::Data)
GCNN_DEFINE_ERROR(LengthMismatch, ErrorCategory::Data)
GCNN_DEFINE_ERROR(VersionMismatch, ErrorCategory::Data)
GCNN_DEFINE_ERROR(CorruptPayload, ErrorCategory::Data)

// harness
GCNN_DEFINE_ERROR(ZeroMeanTruth, ErrorCategory::Data)
GCNN_DEFINE_ERROR(EmptySplit, ErrorCategory::Data)
GCNN_DEFINE_ERROR(DivergedLoss, ErrorCategory::Runtime)

#undef GCNN_DEFINE_ERROR

}  // namespace gcnn
