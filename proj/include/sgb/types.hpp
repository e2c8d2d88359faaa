#pragma once

#include <cstdint>

#include "sgb/geometry.hpp"

namespace sgb {

using RecordId = std::int64_t;
using GroupId = std::int64_t;

// One grouping-attribute tuple: the record it came from plus its projection
// onto the two grouping columns.
struct InputPoint {
    RecordId record = 0;
    Point pos;

    friend bool operator==(const InputPoint&, const InputPoint&) = default;
};

enum class GroupMode { All, Any };

}  // namespace sgb
