#include "prophetlab/instance.hpp"
#include "prophetlab/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace prophetlab {

Instance::Instance(std::vector<Distribution> variables) : vars_(std::move(variables)) {
    if (vars_.empty()) throw domain_error("instance must contain at least one variable");

    // Group by structural hash, verify equality inside each bucket.
    std::unordered_map<uint64_t, std::vector<int>> buckets;
    for (int i = 0; i < n(); ++i)
        buckets[vars_[static_cast<size_t>(i)].structure_hash()].push_back(i);

    for (auto& [h, members] : buckets) {
        std::vector<std::vector<int>> split;
        for (int i : members) {
            bool placed = false;
            for (auto& grp : split) {
                if (vars_[static_cast<size_t>(grp[0])].same_distribution(vars_[static_cast<size_t>(i)])) {
                    grp.push_back(i);
                    placed = true;
                    break;
                }
            }
            if (!placed) split.push_back({i});
        }
        for (auto& grp : split) classes_.push_back(std::move(grp));
    }
    std::sort(classes_.begin(), classes_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

int Instance::min_class_size() const {
    size_t m = vars_.size();
    for (const auto& c : classes_) m = std::min(m, c.size());
    return static_cast<int>(m);
}

bool Instance::all_discrete() const {
    for (const auto& d : vars_)
        if (!d.is_discrete()) return false;
    return true;
}

Instance Instance::subset(const std::vector<int>& keep) const {
    std::vector<Distribution> sub;
    sub.reserve(keep.size());
    for (int i : keep) {
        if (i < 0 || i >= n()) throw domain_error("subset index out of range");
        sub.push_back(vars_[static_cast<size_t>(i)]);
    }
    return Instance(std::move(sub));
}

} // namespace prophetlab
