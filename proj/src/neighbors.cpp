#include "imbsel/neighbors.hpp"

#include <algorithm>
#include <utility>

namespace imbsel {

std::vector<std::size_t> k_nearest(const Matrix& reference, std::span<const double> query,
                                   std::size_t k, std::size_t exclude) {
    using Entry = std::pair<double, std::size_t>;
    std::vector<Entry> best;  // max-heap on (distance, index)
    best.reserve(k + 1);
    if (k == 0) return {};
    for (std::size_t r = 0; r < reference.rows(); ++r) {
        if (r == exclude) continue;
        const double d = squared_distance(reference.row(r), query);
        if (best.size() < k) {
            best.emplace_back(d, r);
            std::push_heap(best.begin(), best.end());
        } else if (Entry{d, r} < best.front()) {
            std::pop_heap(best.begin(), best.end());
            best.back() = {d, r};
            std::push_heap(best.begin(), best.end());
        }
    }
    std::sort_heap(best.begin(), best.end());
    std::vector<std::size_t> out;
    out.reserve(best.size());
    for (const auto& e : best) out.push_back(e.second);
    return out;
}

}  // namespace imbsel
