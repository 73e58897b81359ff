#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "mirrorvis/exact.hpp"
#include "mirrorvis/unravel.hpp"

namespace mirrorvis::io {

inline constexpr std::string_view tool_version = "0.1.0";

// Shortest round-trip decimal form (17 significant digits), C locale,
// identical bytes for identical doubles on every run.
std::string format_real(Real v);

// Header comments (one `# key = value` per meta entry, sorted by key), then
// `t_rad,re_f,im_f,visibility` rows.
void write_curve_csv(std::ostream& os, const exact::VisibilityCurve& curve);

// Same layout with a trailing standard-error column.
void write_estimate_csv(std::ostream& os, const unravel::EnsembleEstimate& est,
                        const std::map<std::string, std::string>& meta);

}  // namespace mirrorvis::io
