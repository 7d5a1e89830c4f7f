#pragma once

#include <iosfwd>

#include "fowler/classify.hpp"
#include "fowler/invariants.hpp"
#include "fowler/io.hpp"
#include "fowler/model.hpp"
#include "fowler/ode.hpp"
#include "fowler/shooting.hpp"

namespace fowler {

Json to_json(const Params& params);
Json to_json(const InvariantReport& report);
Json to_json(const ClassificationReport& report);
Json to_json(const AtlasRow& row);
/// Events sidecar: {"events":[{"t","kind","component"}],"terminal"}.
Json events_json(const Trajectory& traj);

/// One-row CSV with a header naming every Params field.
void write_params_csv(std::ostream& os, const Params& params);

/// `t,v_1..v_p,d1_1..d1_p,d2_1..d2_p,d3_1..d3_p,H`.
void write_trajectory_csv(std::ostream& os, const Params& params, const Trajectory& traj);

/// `a,b,T_a,H,residual`; rows that failed are written with nan fields.
void write_atlas_csv(std::ostream& os, const std::vector<AtlasRow>& rows);

}  // namespace fowler
