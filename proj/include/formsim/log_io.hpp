#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "formsim/sim.hpp"

namespace formsim {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Versioned state-log schema; golden tests pin it.
inline constexpr const char* k_state_csv_header =
    "t,vehicle_id,x,y,vx,vy,xhat,yhat,vxhat,vyhat,ref_x,ref_y,"
    "z1x,z1y,z2x,z2y,mu_x,mu_y,u_x,u_y,triggered,strategy_branch,"
    "weight_norm,bound_norm";

// One row per vehicle per step, full precision (round-trips exactly).
// decimate > 1 keeps every decimate-th step for plotting-scale exports;
// decimated logs are not suitable for recomputing metrics.
void write_state_csv(const SimLog& log, std::ostream& os,
                     std::size_t decimate = 1);
void write_state_csv(const SimLog& log, const std::filesystem::path& path,
                     std::size_t decimate = 1);

// Rebuilds a log from an undecimated state CSV. The config supplies the
// pieces the CSV does not carry (gains, limits, dt); event times and
// branches are reconstructed from the triggered rows.
SimLog read_state_csv(std::istream& is, SimConfig config);
SimLog read_state_csv(const std::filesystem::path& path, SimConfig config);

}  // namespace formsim
