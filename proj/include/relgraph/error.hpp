#pragma once

#include <stdexcept>
#include <string>

namespace relgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define RELGRAPH_DEFINE_ERROR(Name)          \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    }

// schema_registry
RELGRAPH_DEFINE_ERROR(MalformedSchemaFile);
RELGRAPH_DEFINE_ERROR(SchemaInvariantViolation);
RELGRAPH_DEFINE_ERROR(UnknownRelationType);

// graph_generator
RELGRAPH_DEFINE_ERROR(InfeasibleSplice);
RELGRAPH_DEFINE_ERROR(GenerationExhausted);
RELGRAPH_DEFINE_ERROR(MalformedGraphFile);

// surrogate_naming
RELGRAPH_DEFINE_ERROR(MalformedSurrogateFile);
RELGRAPH_DEFINE_ERROR(EmptyGenderPool);
RELGRAPH_DEFINE_ERROR(InsufficientSurrogates);

// relation_oracle
RELGRAPH_DEFINE_ERROR(NodeNotFound);
RELGRAPH_DEFINE_ERROR(Unreachable);
RELGRAPH_DEFINE_ERROR(EmptyChain);
RELGRAPH_DEFINE_ERROR(MalformedLexiconFile);

// task_renderer
RELGRAPH_DEFINE_ERROR(MalformedTemplateFile);
RELGRAPH_DEFINE_ERROR(UnparseablePrompt);
RELGRAPH_DEFINE_ERROR(MissingName);
RELGRAPH_DEFINE_ERROR(TooFewPrompts);

// evaluation_engine
RELGRAPH_DEFINE_ERROR(AdapterFailure);
RELGRAPH_DEFINE_ERROR(CorruptRunDirectory);
RELGRAPH_DEFINE_ERROR(MalformedTaskFile);

// scoring
RELGRAPH_DEFINE_ERROR(IncompleteGradeVector);

// cli and adapter configuration
RELGRAPH_DEFINE_ERROR(ConfigError);
RELGRAPH_DEFINE_ERROR(IoError);

#undef RELGRAPH_DEFINE_ERROR

/// Raised when a graph has no node pair at the requested distance.
class DistanceUnavailable : public Error {
public:
    explicit DistanceUnavailable(int distance)
        : Error("no node pair at distance " + std::to_string(distance)), distance_(distance) {}

    int distance() const noexcept { return distance_; }

private:
    int distance_;
};

} // namespace relgraph
