#include "fowler/serialize.hpp"

#include <ostream>

namespace fowler {

Json to_json(const Params& params) {
  Json j;
  j["n"] = params.n;
  j["p"] = params.p;
  j["c"] = params.c;
  j["chat"] = params.chat;
  j["gamma"] = params.gamma;
  j["K0"] = params.K0;
  j["K2"] = params.K2;
  j["J0"] = params.J0;
  j["sobolev_exp"] = params.sobolev_exp;
  j["a0"] = params.a0;
  j["char_roots"] = Json::array();
  for (double r : params.char_roots) j["char_roots"].push_back(r);
  j["sphere_area"] = params.sphere_area;
  return j;
}

Json to_json(const InvariantReport& report) {
  Json j;
  j["H0"] = report.H0;
  j["max_drift"] = report.max_drift;
  j["pohozaev_cyl"] = report.pohozaev_cyl;
  j["pohozaev_sph"] = report.pohozaev_sph;
  Json mon = Json::object();
  for (const auto& [name, m] : report.monitors)
    mon[name] = Json{{"pass", m.pass}, {"worst_margin", m.worst_margin}, {"worst_t", m.worst_t}};
  j["monitors"] = mon;
  return j;
}

Json to_json(const ClassificationReport& report) {
  Json j;
  j["pohozaev"] = report.pohozaev;
  j["uncertainty"] = report.uncertainty;
  j["verdict"] = std::string(to_string(report.verdict));
  j["gamma_hat"] = report.gamma_hat;
  j["necksize_hat"] = report.necksize_hat ? Json(*report.necksize_hat) : Json(nullptr);
  j["period_hat"] = report.period_hat ? Json(*report.period_hat) : Json(nullptr);
  j["lambda_hat"] = report.lambda_hat;
  j["semi_singular"] = report.semi_singular;
  return j;
}

Json to_json(const AtlasRow& row) {
  Json j;
  j["a"] = row.a;
  j["b"] = row.b;
  j["T_a"] = row.T_a;
  j["H"] = row.H;
  j["residual"] = row.residual;
  j["monitors_pass"] = row.monitors_pass;
  if (!row.error.empty()) j["error"] = row.error;
  return j;
}

Json events_json(const Trajectory& traj) {
  Json j;
  j["events"] = Json::array();
  for (const auto& e : traj.events)
    j["events"].push_back(Json{{"t", e.t}, {"kind", std::string(to_string(e.kind))}, {"component", e.component + 1}});
  j["terminal"] = std::string(to_string(traj.terminal));
  return j;
}

void write_params_csv(std::ostream& os, const Params& params) {
  os << "n,p,c,chat,gamma,K0,K2,J0,sobolev_exp,a0,root_1,root_2,root_3,root_4,sphere_area\n";
  os << params.n << ',' << params.p;
  for (double x : {params.c, params.chat, params.gamma, params.K0, params.K2, params.J0, params.sobolev_exp,
                   params.a0, params.char_roots[0], params.char_roots[1], params.char_roots[2], params.char_roots[3],
                   params.sphere_area})
    os << ',' << format_double(x);
  os << '\n';
}

void write_trajectory_csv(std::ostream& os, const Params& params, const Trajectory& traj) {
  const int p = traj.states.empty() ? params.p : traj.front().p;
  os << 't';
  for (const char* prefix : {"v", "d1", "d2", "d3"})
    for (int i = 1; i <= p; ++i) os << ',' << prefix << '_' << i;
  os << ",H\n";
  for (const auto& s : traj.states) {
    os << format_double(s.t);
    for (double x : s.y) os << ',' << format_double(x);
    os << ',' << format_double(hamiltonian(params, s)) << '\n';
  }
}

void write_atlas_csv(std::ostream& os, const std::vector<AtlasRow>& rows) {
  os << "a,b,T_a,H,residual\n";
  for (const auto& r : rows)
    os << format_double(r.a) << ',' << format_double(r.b) << ',' << format_double(r.T_a) << ','
       << format_double(r.H) << ',' << format_double(r.residual) << '\n';
}

}  // namespace fowler
