#pragma once

#include <stdexcept>
#include <string>

namespace mnet {

// Base for all library errors so callers can catch everything from this
// library in one handler when they do not care about the precise kind.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field / matrix layer
struct CompositeModulus : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// network layer
struct SchemaError : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };
struct CycleDetected : Error { using Error::Error; };
struct InvalidNetwork : Error { using Error::Error; };

// generator layer
struct InvalidM : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// coding layer
struct ShapeMismatch : Error { using Error::Error; };
struct UncoveredEdge : Error { using Error::Error; };
struct UnknownMessageRef : Error { using Error::Error; };

// polymatroid layer
struct IncompleteTable : Error { using Error::Error; };
struct AmbientMismatch : Error { using Error::Error; };
struct GroundSetTooLarge : Error { using Error::Error; };
struct PartialMapping : Error { using Error::Error; };

// ledger layer
struct LayoutMismatch : Error { using Error::Error; };
struct NotASolution : Error { using Error::Error; };

// solver layer
struct BudgetZero : Error { using Error::Error; };

// cli layer
struct IoError : Error { using Error::Error; };

}  // namespace mnet
