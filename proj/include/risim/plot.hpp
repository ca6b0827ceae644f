// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <string>
#include <vector>

#include "risim/experiment.hpp"

namespace risim {

enum class PlotMetric { RATE, NMSE, CHANNEL_POWER };

// Renders seed means with standard-error whiskers per algorithm over the
// sweep axis, as a self-contained SVG. Failed rows are skipped; rows from
// different sweep axes cannot share a plot and throw. Byte-deterministic for
// identical input.
std::string render_plot_svg(const std::vector<ResultRow>& rows,
                            PlotMetric metric = PlotMetric::RATE);

void render_plot(const std::vector<ResultRow>& rows, const std::string& path,
                 PlotMetric metric = PlotMetric::RATE);

}  // namespace risim
