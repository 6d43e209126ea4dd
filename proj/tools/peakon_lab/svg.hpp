#pragma once

#include <string>
#include <vector>

#include "output.hpp"

namespace peakon::lab {

enum class PlotKind { profile, series };

/// `profile`: one curve u(x) per distinct t of a t,x,u table.
/// `series`: the first column against each of `columns` (all others if
/// empty). Throws std::invalid_argument on an empty table or missing columns.
[[nodiscard]] std::string render_svg(const CsvTable& table, PlotKind kind, const std::vector<std::string>& columns,
                                     const std::string& title);

}  // namespace peakon::lab
