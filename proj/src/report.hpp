#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grid.hpp"

namespace bmtk {

using Json = nlohmann::ordered_json;

/// JSON-safe number: infinities and NaNs become strings so documents stay valid.
Json json_number(double v);

/// One lemma-inequality evaluation: LHS, named RHS pieces, and the measured
/// constant lhs / sum(rhs).
struct EstimateReport {
    std::string lemma;
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhs_terms;
    double ratio = 0.0;
    Json params;
    std::uint64_t seed = 0;
    Grid grid;
    std::string note;

    double rhs_total() const {
        double s = 0.0;
        for (const auto& [name, v] : rhs_terms) s += v;
        return s;
    }

    Json to_json() const;
};

/// ratio = lhs / sum(rhs); 0/0 counts as 0, finite/0 is an assertion failure.
/// lhs_floor absorbs roundoff: an lhs below it counts as zero when rhs is 0.
double safe_ratio(double lhs, double rhs_total, double lhs_floor = 0.0);

}  // namespace bmtk
