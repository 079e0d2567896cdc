#ifndef STBCLAB_GROUPING_HPP
#define STBCLAB_GROUPING_HPP

#include <string>
#include <vector>

#include "stbclab/errors.hpp"

namespace stbclab {

// Partition of the symbol indices {0, ..., n-1} into decoding groups.
struct GroupingScheme {
    std::vector<std::vector<int>> groups;

    int num_groups() const { return static_cast<int>(groups.size()); }
    int total_symbols() const;

    static GroupingScheme single_group(int n);
    static GroupingScheme per_symbol(int n);

    // Parses "0,2|1,3": groups separated by '|', indices by ','.
    static GroupingScheme parse(const std::string& text);
    std::string to_string() const;

    // Groups must be nonempty, disjoint, and cover {0, ..., n-1}.
    void validate(int n) const;
};

} // namespace stbclab

#endif
