#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pegf/errors.hpp"

namespace pegf {

// Sorted observations with provenance. Values are ascending and finite;
// estimators additionally require n >= 2 and nonzero spread.
struct sample_data {
    std::vector<double> values;
    std::string origin;

    std::size_t size() const { return values.size(); }
};

inline sample_data make_sample(std::vector<double> values, std::string origin = {}) {
    if (values.empty())
        throw invalid_parameter("sample must contain at least one value");
    for (double v : values)
        if (!std::isfinite(v))
            throw invalid_parameter("sample values must be finite");
    std::sort(values.begin(), values.end());
    return sample_data{std::move(values), std::move(origin)};
}

}  // namespace pegf
