#pragma once

#include <stdexcept>
#include <string>

namespace rebrick {

// Base type for every error the library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CatalogError : Error { using Error::Error; };          // unknown brick type
struct PlacementError : Error { using Error::Error; };        // collision / out of bounds
struct ShapeError : Error { using Error::Error; };            // grid dimension mismatch
struct EmptyInputError : Error { using Error::Error; };       // empty grid or cloud
struct DegenerateGeometryError : Error { using Error::Error; };
struct InsufficientPointsError : Error { using Error::Error; };
struct NoOverlapError : Error { using Error::Error; };        // ICP found no correspondences
struct MatchFailureError : Error { using Error::Error; };     // every library entry failed
struct IndexError : Error { using Error::Error; };            // action component out of range
struct InvalidActionError : Error { using Error::Error; };    // masked-out action passed to step
struct InventoryError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct TrainingError : Error { using Error::Error; };         // non-finite loss and friends

} // namespace rebrick
