#pragma once

#include <cstdint>
#include <optional>

namespace cubt {

/// Tuning knobs for the three stages.
///
/// minsize  - a node with fewer observations is never split
/// mindev   - a split must recover at least mindev * R(root) deviance
/// mindist  - pruning threshold epsilon; 0 skips pruning entirely
/// delta    - trimming proportion of the dissimilarity kernel, in (0,1]
/// k / eta_quantile - exactly one of them drives the joining stage
struct Params {
    int minsize = 1;
    double mindev = 0.8;
    double mindist = 0.0;
    double delta = 0.2;
    std::optional<int> k;
    std::optional<double> eta_quantile;
    std::uint64_t seed = 0;
    bool standardize = false;
    // Off by default: stopping rule (i) constrains the parent only, but
    // callers wanting balanced leaves can also bound the children.
    bool enforce_child_minsize = false;

    /// Throws InvalidParam unless exactly one of {k, eta_quantile} is set
    /// and all ranges are sane. Used by the stages that need a joining rule.
    void validate_for_join() const;

    /// Range checks that apply to every stage.
    void validate_basic() const;
};

}  // namespace cubt
