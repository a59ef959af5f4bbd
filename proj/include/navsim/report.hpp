#pragma once

#include <string>
#include <vector>

#include "navsim/runner.hpp"

namespace navsim {

/// record.csv with the fixed column order
/// time,true_x,true_y,true_theta,est_x,est_y,est_theta,v,w,score,blocked.
/// Formatting is locale-independent and deterministic.
void write_record_csv(const RunRecord& rec, const std::string& path);

/// Flat JSON object of run metrics plus the outcome.
void write_metrics_json(const Metrics& m, Outcome outcome,
                        const std::string& path);

/// Per-seed comparison rows plus aggregate verdicts.
void write_compare_csv(const CompareReport& rep, const std::string& path);

/// Two stacked panels (v over t, w over t) with the DWA and MPC traces
/// overlaid, one representative record per planner.
void write_traces_svg(const RunRecord& dwa, const RunRecord& mpc,
                      const std::string& path);

/// Map, global path and driven trajectory of a single run.
void write_trajectory_svg(const RunRecord& rec, const std::string& path);

}  // namespace navsim
