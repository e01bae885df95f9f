#include "weyl/basis.hpp"

#include <algorithm>
#include <numeric>

namespace weyl {

bool valid(const BasisTruncation& t) {
    return t.n >= 1 && t.n <= 2 && t.N >= 1;
}

std::vector<std::vector<int>> graded_indices(const BasisTruncation& t) {
    if (!valid(t))
        throw ConfigError("basis truncation: need n in {1,2} and N >= 1");
    std::vector<std::vector<int>> idx;
    idx.reserve(static_cast<size_t>(t.size()));
    std::vector<int> cur(t.n, 0);
    while (true) {
        idx.push_back(cur);
        int i = t.n - 1;
        while (i >= 0 && cur[i] == t.N - 1) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [](const std::vector<int>& a, const std::vector<int>& b) {
                         int da = std::accumulate(a.begin(), a.end(), 0);
                         int db = std::accumulate(b.begin(), b.end(), 0);
                         if (da != db) return da < db;
                         return a < b;
                     });
    return idx;
}

} // namespace weyl
