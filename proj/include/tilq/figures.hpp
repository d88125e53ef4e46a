#pragma once

#include <string>

#include "tilq/csv.hpp"
#include "tilq/riccati.hpp"

namespace tilq {

struct FigureOptions {
  ModelParams params;            // baseline for every curve of the figure
  int partition_intervals = 800;  // equilibrium solves
  int subgrid_factor = 8;
  int samples = 201;             // emitted s-grid resolution
  bool fig2_caption_defaults = true;  // fig 2 uses lambda=0.3, gamma=0.3 unless overridden
};

// Builds the curves behind figure `id` (1..8) and returns the CSV table.
// Sweep figures (1, 4) emit one column per parameter variation; overlay
// figures (3, 5, 7, 8) emit the compared curves side by side.
CsvTable build_figure(int id, const FigureOptions& options);

// Writes fig<id>.csv and fig<id>.svg under out_dir.
void emit_figure(int id, const FigureOptions& options, const std::string& out_dir);

}  // namespace tilq
