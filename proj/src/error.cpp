#include "tubeband/error.hpp"

namespace tubeband {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::EmptyDesign: return "empty-design";
        case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
        case ErrorKind::NumericalDegeneracy: return "numerical-degeneracy";
    }
    return "unknown";
}

}  // namespace tubeband
