#include "cubt/params.hpp"

#include <string>

#include "cubt/errors.hpp"

namespace cubt {

void Params::validate_basic() const {
    if (minsize < 1) throw InvalidParam("minsize must be >= 1");
    if (!(mindev > 0.0) || mindev >= 1.0) throw InvalidParam("mindev must lie in (0, 1)");
    if (mindist < 0.0) throw InvalidParam("mindist must be >= 0");
    if (!(delta > 0.0) || delta > 1.0) throw InvalidParam("delta must lie in (0, 1]");
    if (k && *k < 1) throw KOutOfRange("k must be >= 1, got " + std::to_string(*k));
    if (eta_quantile && (!(*eta_quantile > 0.0) || *eta_quantile >= 1.0))
        throw InvalidParam("eta_quantile must lie in (0, 1)");
}

void Params::validate_for_join() const {
    validate_basic();
    if (k.has_value() == eta_quantile.has_value())
        throw InvalidParam("exactly one of k and eta_quantile must be set");
}

}  // namespace cubt
