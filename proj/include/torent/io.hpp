#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "torent/torus.hpp"

namespace torent {

/// Formats a double with enough digits to round-trip ("%.17g").
std::string format_double(double v);

/// Point CSV: header row "x0,x1,...,x{d-1}", one row per point, decimal
/// floats in [0,1).
SampleSet read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const SampleSet& s);

/// Single-column CSV of the estimator's per-point log terms.
void write_terms_csv(std::ostream& out, std::span<const double> terms);

}  // namespace torent
