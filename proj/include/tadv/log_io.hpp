#pragma once

#include <string>
#include <vector>

#include "tadv/sim.hpp"
#include "tadv/trajectory.hpp"

namespace tadv {

std::string csv_header(int tau_dim);

// One row per LogRow, floats printed with 17 significant digits so values
// round-trip exactly. tau_dim_if_empty sizes the header when the log has no
// rows.
void write_csv(const std::vector<LogRow>& log, const std::string& path,
               int tau_dim_if_empty = 6);

std::vector<LogRow> read_csv(const std::string& path);

// Writes psi_vs_t.svg, psidot_vs_t.svg, wrench_vs_t.svg and
// reference_vs_t.svg into dir. The reference figure overlays the advanced
// reference from the log with the nominal playback x_d(psi = t) evaluated on
// the curve.
void write_plots(const std::vector<LogRow>& log, const ParamCurve& curve,
                 const std::string& dir);

}  // namespace tadv
