#pragma once
#include "prophetlab/distribution.hpp"

#include <vector>

namespace prophetlab {

/// An ordered collection of independent variables plus the partition of
/// indices into classes of identical distributions (used by the frequent
/// prophet machinery).  Immutable after construction.
class Instance {
public:
    explicit Instance(std::vector<Distribution> variables);

    int n() const { return static_cast<int>(vars_.size()); }
    const Distribution& var(int i) const { return vars_[static_cast<size_t>(i)]; }
    const std::vector<Distribution>& variables() const { return vars_; }

    const std::vector<std::vector<int>>& frequency_classes() const { return classes_; }
    int min_class_size() const;
    bool all_discrete() const;

    // Sub-instance keeping the given original indices (ascending order kept).
    Instance subset(const std::vector<int>& keep) const;

private:
    std::vector<Distribution> vars_;
    std::vector<std::vector<int>> classes_;
};

} // namespace prophetlab
