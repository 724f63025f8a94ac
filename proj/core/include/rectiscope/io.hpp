#pragma once

#include <iosfwd>
#include <string>

#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Point-cloud CSV: a required header `x1,...,xn,w`, then one atom per row.
DiscreteMeasure read_csv(std::istream& in);
void write_csv(std::ostream& out, const DiscreteMeasure& mu);

/// Point-cloud JSON: {"n": n, "atoms": [{"x": [...], "w": w}, ...]}.
DiscreteMeasure read_json(std::istream& in);
void write_json(std::ostream& out, const DiscreteMeasure& mu);

/// Reads JSON when the path ends in .json, CSV otherwise.
DiscreteMeasure load_measure(const std::string& path);

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

}  // namespace rectiscope
