#include "folcc/report.hpp"

#include <sstream>

namespace folcc::report {

Json cochain(const gf::ExteriorCochain& c) {
  Json terms = Json::array();
  for (const auto& [m, q] : c.terms()) terms.push_back(Json{{"indices", m}, {"coefficient", to_string(q)}});
  return Json{{"text", c.to_string()}, {"terms", terms}};
}

Json cohomology(const std::vector<gf::CohomologyGroup>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) {
    Json reps = Json::array();
    for (const auto& r : g.representatives) reps.push_back(cochain(r));
    out.push_back(Json{{"degree", g.degree},
                       {"weight", g.weight},
                       {"dim", g.dim},
                       {"cochains", g.cochains},
                       {"rank_in", g.rank_in},
                       {"rank_out", g.rank_out},
                       {"representatives", reps}});
  }
  return out;
}

Json identities(const std::vector<IdentityResult>& ids) {
  Json out = Json::array();
  for (const auto& i : ids)
    out.push_back(Json{{"name", i.name}, {"statement", i.statement}, {"holds", i.holds}, {"difference", i.difference}});
  return out;
}

Json connection(const ConnectionReport& r) {
  Json gens = Json::array();
  for (const auto& g : r.generators)
    gens.push_back(Json{{"generator", g.generator},
                        {"max_residual", g.max_residual},
                        {"worst_point", g.worst_point},
                        {"evaluated", g.evaluated},
                        {"errors", g.errors}});
  return Json{{"connection", r.kind == ConnectionKind::affine ? "affine" : "projective"},
              {"tolerance", r.tolerance},
              {"max_residual", r.max_residual},
              {"pass", r.pass},
              {"generators", gens}};
}

Json rotation(const RotationEstimate& r) {
  return Json{{"rho", r.rho}, {"raw", r.raw}, {"bound", r.bound}, {"iterations", r.iterations}};
}

Json diophantine(const DiophantineReport& r) {
  Json pq = Json::array();
  for (const auto& a : r.partial_quotients) pq.push_back(a.get_str());
  Json conv = Json::array();
  for (const auto& c : r.convergents)
    conv.push_back(Json{{"p", c.p.get_str()}, {"q", c.q.get_str()}, {"error", c.error}, {"exponent", c.exponent}});
  return Json{{"exponent", r.exponent},
              {"pointwise_sup", r.pointwise_sup},
              {"constant", r.constant},
              {"liouville_suspect", r.liouville_suspect},
              {"partial_quotients", pq},
              {"convergents", conv}};
}

Json fixed_points(const std::vector<FixedPoint>& fps) {
  Json out = Json::array();
  for (const auto& f : fps)
    out.push_back(Json{{"x", f.x},
                       {"derivative", f.derivative},
                       {"class", f.hyperbolic ? "hyperbolic" : "non-hyperbolic"},
                       {"left_semi_isolated", f.left_semi_isolated},
                       {"right_semi_isolated", f.right_semi_isolated},
                       {"resolution", f.resolution},
                       {"note", f.note}});
  return out;
}

Json reeb(const ReebReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"n", row.n},
                        {"x0n", row.x0n},
                        {"ratio2", row.ratio[0]},
                        {"ratio3", row.ratio[1]},
                        {"ratio4", row.ratio[2]},
                        {"ln_fprime", row.ln_fprime},
                        {"ln_fprime_over_f", row.ln_fprime_over_f}});
  const auto& p = r.profile;
  return Json{{"profile",
               {{"f0_zero", p.f0_zero},
                {"nonnegative", p.nonnegative},
                {"even", p.even},
                {"increasing", p.increasing},
                {"blows_up", p.blows_up},
                {"inverse_derivative_vanishes", p.inverse_derivative_vanishes}}},
              {"ratios_decreasing", {r.ratios_decreasing[0], r.ratios_decreasing[1], r.ratios_decreasing[2]}},
              {"ln_fprime_increasing", r.ln_fprime_increasing},
              {"max_ln_fprime", r.max_ln_fprime},
              {"ln_ratio_decreasing", r.ln_ratio_decreasing},
              {"truncated", r.truncated},
              {"truncated_at", r.truncated_at},
              {"rows", rows}};
}

Json flow(const FlowReport& r) {
  return Json{{"time_one_residual", r.time_one_residual},
              {"group_law_residual", r.group_law_residual},
              {"zero_in_domain", r.zero_in_domain},
              {"v0", r.v0},
              {"v0_prime", r.v0_prime},
              {"phi_prime0", r.phi_prime0}};
}

Json q_polynomial(const QPolynomial& q) {
  Json terms = Json::array();
  for (const auto& [e, c] : q.coefficients) terms.push_back(Json{{"exponents", e}, {"coefficient", c.get_str()}});
  return Json{{"n", q.n}, {"degree", q.degree()}, {"text", q.to_string()}, {"terms", terms}};
}

std::string csv(const Json& rows) {
  std::ostringstream os;
  if (!rows.is_array() || rows.empty()) return "";
  auto cell = [](const Json& v) {
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    }
    return v.dump();
  };
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) {
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [k, v] : row.items()) {
      os << (first ? "" : ",") << cell(v);
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace folcc::report
