#include "matgeom/spec.hpp"

#include "matgeom/error.hpp"

namespace matgeom {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");
    if (!(abs_tol >= 0)) throw Error(ErrorKind::InvalidArgument, "abs_tol must be nonnegative");
    if (max_evals < 1) throw Error(ErrorKind::InvalidArgument, "max_evals must be >= 1");
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
}

}  // namespace matgeom
