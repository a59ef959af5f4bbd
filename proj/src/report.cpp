#include "navsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace navsim {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

}  // namespace

void write_record_csv(const RunRecord& rec, const std::string& path) {
  std::ofstream os = open_out(path);
  os << "time,true_x,true_y,true_theta,est_x,est_y,est_theta,v,w,score,"
        "blocked\n";
  for (const RunRow& r : rec.rows) {
    os << fmt(r.time) << ',' << fmt(r.true_pose.x) << ',' << fmt(r.true_pose.y)
       << ',' << fmt(r.true_pose.theta) << ',' << fmt(r.est_pose.x) << ','
       << fmt(r.est_pose.y) << ',' << fmt(r.est_pose.theta) << ','
       << fmt(r.v) << ',' << fmt(r.w) << ',' << fmt(r.score) << ','
       << (r.blocked ? 1 : 0) << '\n';
  }
}

void write_metrics_json(const Metrics& m, Outcome outcome,
                        const std::string& path) {
  nlohmann::ordered_json j;
  j["outcome"] = outcome_name(outcome);
  j["success"] = m.success;
  j["time_to_goal_s"] = m.time_to_goal;
  j["path_length_m"] = m.path_length;
  j["tracking_rmse_m"] = m.tracking_rmse;
  j["v_std"] = m.v_std;
  j["w_std"] = m.w_std;
  j["w_min"] = m.w_min;
  j["w_max"] = m.w_max;
  j["mean_plan_ms"] = m.mean_plan_ms;
  open_out(path) << j.dump(2) << '\n';
}

void write_compare_csv(const CompareReport& rep, const std::string& path) {
  std::ofstream os = open_out(path);
  os << "scenario,seed,dwa_success,mpc_success,dwa_w_std,mpc_w_std,"
        "dwa_w_min,mpc_w_min,dwa_rmse,mpc_rmse,dwa_time,mpc_time\n";
  for (const ComparePair& p : rep.pairs) {
    os << rep.scenario << ',' << p.seed << ',' << (p.dwa.success ? 1 : 0)
       << ',' << (p.mpc.success ? 1 : 0) << ',' << fmt(p.dwa.w_std) << ','
       << fmt(p.mpc.w_std) << ',' << fmt(p.dwa.w_min) << ','
       << fmt(p.mpc.w_min) << ',' << fmt(p.dwa.tracking_rmse) << ','
       << fmt(p.mpc.tracking_rmse) << ',' << fmt(p.dwa.time_to_goal) << ','
       << fmt(p.mpc.time_to_goal) << '\n';
  }
  os << "# totals: dwa_success=" << rep.dwa_success
     << " mpc_success=" << rep.mpc_success
     << " mpc_w_std_lower=" << rep.mpc_w_std_lower
     << " mpc_rmse_lower=" << rep.mpc_rmse_lower << '\n';
}

namespace {

struct PanelScale {
  double t_max = 1.0;
  double y_min = 0.0, y_max = 1.0;

  void include(const std::vector<RunRow>& rows, bool angular) {
    for (const RunRow& r : rows) {
      t_max = std::max(t_max, r.time);
      const double y = angular ? r.w : r.v;
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
};

void polyline(std::ofstream& os, const std::vector<RunRow>& rows, bool angular,
              const PanelScale& s, double x0, double y0, double w, double h,
              const char* color) {
  if (rows.empty()) return;
  os << "<polyline fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"1.5\" points=\"";
  const double span = std::max(1e-9, s.y_max - s.y_min);
  for (const RunRow& r : rows) {
    const double y = angular ? r.w : r.v;
    const double px = x0 + w * r.time / s.t_max;
    const double py = y0 + h - h * (y - s.y_min) / span;
    os << fmt(px) << ',' << fmt(py) << ' ';
  }
  os << "\"/>\n";
}

void panel_frame(std::ofstream& os, double x0, double y0, double w, double h,
                 const char* title) {
  os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w
     << "\" height=\"" << h
     << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 + 14
     << "\" font-size=\"12\" font-family=\"sans-serif\">" << title
     << "</text>\n";
}

}  // namespace

void write_traces_svg(const RunRecord& dwa, const RunRecord& mpc,
                      const std::string& path) {
  std::ofstream os = open_out(path);
  const double width = 640, panel_h = 200, margin = 40;
  const double height = 2 * panel_h + 3 * margin;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";

  PanelScale sv;
  sv.include(dwa.rows, false);
  sv.include(mpc.rows, false);
  PanelScale sw;
  sw.include(dwa.rows, true);
  sw.include(mpc.rows, true);

  const double px = margin, pw = width - 2 * margin;
  panel_frame(os, px, margin, pw, panel_h, "linear velocity v [m/s]");
  polyline(os, dwa.rows, false, sv, px, margin, pw, panel_h, "#d62728");
  polyline(os, mpc.rows, false, sv, px, margin, pw, panel_h, "#1f77b4");

  const double y2 = 2 * margin + panel_h;
  panel_frame(os, px, y2, pw, panel_h, "angular velocity w [rad/s]");
  polyline(os, dwa.rows, true, sw, px, y2, pw, panel_h, "#d62728");
  polyline(os, mpc.rows, true, sw, px, y2, pw, panel_h, "#1f77b4");

  os << "<text x=\"" << margin << "\" y=\"" << height - 10
     << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"#d62728\">"
        "DWA</text>\n";
  os << "<text x=\"" << margin + 50 << "\" y=\"" << height - 10
     << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"#1f77b4\">"
        "MPC</text>\n";
  os << "</svg>\n";
}

void write_trajectory_svg(const RunRecord& rec, const std::string& path) {
  std::ofstream os = open_out(path);
  const OccupancyGrid& g = rec.world.grid;
  const double scale = 60.0;  // px per meter
  const double w = g.width * g.resolution * scale;
  const double h = g.height * g.resolution * scale;
  auto sx = [&](double x) { return (x - g.origin.x) * scale; };
  auto sy = [&](double y) { return h - (y - g.origin.y) * scale; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"#fafafa\"/>\n";
  const double cell = g.resolution * scale;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      if (g.at(c, r) != Cell::Occupied) continue;
      os << "<rect x=\"" << fmt(c * cell) << "\" y=\""
         << fmt(h - (r + 1) * cell) << "\" width=\"" << fmt(cell)
         << "\" height=\"" << fmt(cell) << "\" fill=\"#333\"/>\n";
    }
  }
  if (rec.global_path.size() >= 2) {
    os << "<polyline fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\" "
          "stroke-dasharray=\"6 4\" points=\"";
    for (const Pose& p : rec.global_path) {
      os << fmt(sx(p.x)) << ',' << fmt(sy(p.y)) << ' ';
    }
    os << "\"/>\n";
  }
  if (rec.rows.size() >= 2) {
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
          "points=\"";
    for (const RunRow& r : rec.rows) {
      os << fmt(sx(r.true_pose.x)) << ',' << fmt(sy(r.true_pose.y)) << ' ';
    }
    os << "\"/>\n";
  }
  os << "<circle cx=\"" << fmt(sx(rec.world.start.x)) << "\" cy=\""
     << fmt(sy(rec.world.start.y)) << "\" r=\"5\" fill=\"#2ca02c\"/>\n";
  os << "<circle cx=\"" << fmt(sx(rec.world.goal.x)) << "\" cy=\""
     << fmt(sy(rec.world.goal.y)) << "\" r=\"5\" fill=\"#d62728\"/>\n";
  os << "</svg>\n";
}

}  // namespace navsim
