#include "jetflow/scenario.hpp"

#include <fstream>

#include "json.hpp"

#include "jetflow/errors.hpp"

namespace jetflow {

using nlohmann::json;

namespace {

VectorXd toVector(const json& a, int n, const char* what) {
  if (!a.is_array() || static_cast<int>(a.size()) != n)
    throw Error(std::string("scenario: ") + what + " must be an array of length " +
                std::to_string(n));
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = a[i].get<double>();
  return v;
}

}  // namespace

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("scenario: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("scenario: invalid JSON: ") + e.what());
  }

  Scenario s;
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<int>() < 1)
    throw Error("scenario: field 'n' must be a positive integer");
  s.n = doc["n"].get<int>();

  if (doc.contains("h11")) s.h = TemporalMetric::fromExpr(doc["h11"].get<std::string>());

  if (doc.contains("phi")) {
    const json& m = doc["phi"];
    if (!m.is_array() || static_cast<int>(m.size()) != s.n)
      throw Error("scenario: 'phi' must be an n x n matrix of expressions");
    std::vector<std::vector<std::string>> entries;
    for (const auto& row : m) {
      if (!row.is_array() || static_cast<int>(row.size()) != s.n)
        throw Error("scenario: 'phi' must be an n x n matrix of expressions");
      entries.push_back(row.get<std::vector<std::string>>());
    }
    s.phi = SpatialMetric::fromExpr(entries);
  }

  if (doc.contains("lagrangian"))
    s.lagrangian = JetLagrangian::fromExpr(doc["lagrangian"].get<std::string>(), s.n);

  if (doc.contains("change")) {
    const json& c = doc["change"];
    JetChange jc;
    jc.time = TimeChange::fromExpr(c.at("t_forward").get<std::string>(),
                                   c.value("t_inverse", std::string()));
    std::vector<std::string> fwd = c.at("x_forward").get<std::vector<std::string>>();
    std::vector<std::string> inv;
    if (c.contains("x_inverse")) inv = c["x_inverse"].get<std::vector<std::string>>();
    jc.space = SpaceChange::fromExpr(fwd, inv, s.n);
    s.change = jc;
  }

  if (doc.contains("initial")) {
    json init = doc["initial"];
    if (init.is_array()) {
      if (init.empty()) throw Error("scenario: 'initial' list is empty");
      init = init[0];
    }
    s.t0 = init.at("t0").get<double>();
    s.x0 = toVector(init.at("x0"), s.n, "initial.x0");
    s.v0 = toVector(init.at("v0"), s.n, "initial.v0");
    s.hasInitial = true;
  }
  s.tEnd = doc.value("t_end", s.t0 + 1.0);

  if (doc.contains("integrator")) {
    const json& integ = doc["integrator"];
    std::string st = integ.value("stepper", std::string("rk4"));
    if (st == "rk4")
      s.stepper = Stepper::RK4;
    else if (st == "rk45")
      s.stepper = Stepper::RK45;
    else
      throw Error("scenario: integrator.stepper must be 'rk4' or 'rk45'");
    s.dt = integ.value("dt", s.dt);
    s.absTol = integ.value("abs_tol", s.absTol);
    s.relTol = integ.value("rel_tol", s.relTol);
  }

  if (doc.contains("checks")) {
    const json& ch = doc["checks"];
    s.trials = ch.value("trials", s.trials);
    s.seed = ch.value("seed", s.seed);
    s.corruptSpatialConnection =
        ch.value("corrupt_spatial_connection", s.corruptSpatialConnection);
  }
  return s;
}

}  // namespace jetflow
