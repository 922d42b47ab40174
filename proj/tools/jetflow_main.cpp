#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jetflow/dynamics.hpp"
#include "jetflow/errors.hpp"
#include "jetflow/lagrangian.hpp"
#include "jetflow/laws.hpp"
#include "jetflow/scenario.hpp"
#include "jetflow/semispray.hpp"

using nlohmann::json;
using namespace jetflow;

namespace {

int logLevel() {
  const char* env = std::getenv("JETFLOW_LOG");
  if (!env) return 0;
  std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void logInfo(const std::string& msg) {
  if (logLevel() >= 1) std::cerr << "jetflow: " << msg << "\n";
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void writeCsv(std::ostream& out, const Trajectory& traj, int n) {
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= n; ++i) out << ",v" << i;
  out << "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << fmt17(traj.t[k]);
    for (int i = 0; i < n; ++i) out << "," << fmt17(traj.x[k][i]);
    for (int i = 0; i < n; ++i) out << "," << fmt17(traj.v[k][i]);
    out << "\n";
  }
}

struct Options {
  std::string scenarioPath;
  std::string mode = "harmonic";
  std::string outPath;
  bool paperExactBracket = false;
  std::uint64_t seed = 0;
  bool seedSet = false;
};

SodeRhs buildRhs(const Scenario& s, const Options& opt) {
  const BracketVariant variant =
      opt.paperExactBracket ? BracketVariant::PaperExact : BracketVariant::Corrected;
  if (opt.mode == "harmonic") {
    if (s.lagrangian) {
      if (!s.h) throw Error("scenario: lagrangian dynamics needs 'h11'");
      return harmonicRhs(elSemispray(*s.lagrangian, *s.h, variant));
    }
    if (!s.h || !s.phi) throw Error("scenario: needs 'h11' and 'phi' or a 'lagrangian'");
    return harmonicRhs(canonicalSemispray(*s.h, *s.phi));
  }
  if (s.lagrangian) {
    if (!s.h) throw Error("scenario: lagrangian dynamics needs 'h11'");
    return autoparallelRhs(connectionFromLagrangian(*s.lagrangian, *s.h, variant));
  }
  if (!s.h || !s.phi) throw Error("scenario: needs 'h11' and 'phi' or a 'lagrangian'");
  return autoparallelRhs(canonicalConnection(*s.h, *s.phi));
}

int cmdIntegrate(const Options& opt) {
  Scenario s = Scenario::load(opt.scenarioPath);
  if (!s.hasInitial) throw Error("scenario: 'initial' is required for integrate");
  SodeProblem prob;
  prob.rhs = buildRhs(s, opt);
  prob.t0 = s.t0;
  prob.x0 = s.x0;
  prob.v0 = s.v0;
  prob.tEnd = s.tEnd;
  prob.stepper = s.stepper;
  prob.dt = s.dt;
  prob.absTol = s.absTol;
  prob.relTol = s.relTol;
  logInfo("integrating " + opt.mode + " curve over [" + fmt17(prob.t0) + ", " +
          fmt17(prob.tEnd) + "]");
  Trajectory traj = integrate(prob);
  logInfo(std::to_string(traj.stepsAccepted) + " steps accepted, " +
          std::to_string(traj.stepsRejected) + " rejected");
  if (opt.outPath.empty()) {
    writeCsv(std::cout, traj, s.n);
  } else {
    std::ofstream out(opt.outPath, std::ios::binary);
    if (!out) throw Error("cannot open output file " + opt.outPath);
    writeCsv(out, traj, s.n);
  }
  return 0;
}

struct Record {
  double maxError = 0.0;
  double tolerance = 0.0;
  bool enforced = true;
};

int emitReport(const std::string& scenarioPath, std::uint64_t seed, int trials,
               const std::map<std::string, Record>& records) {
  json head;
  head["scenario"] = scenarioPath;
  head["seed"] = seed;
  head["trials"] = trials;
  head["rng"] = "mt19937_64";
  std::cout << head.dump() << "\n";
  bool allPass = true;
  for (const auto& [name, r] : records) {  // std::map iterates sorted by name
    bool pass = r.maxError <= r.tolerance;
    if (r.enforced && !pass) allPass = false;
    json line;
    line["check"] = name;
    line["max_error"] = r.maxError;
    line["tolerance"] = r.tolerance;
    line["pass"] = pass;
    if (!r.enforced) line["enforced"] = false;
    std::cout << line.dump() << "\n";
  }
  return allPass ? 0 : 3;
}

int cmdCheck(const Options& opt) {
  Scenario s = Scenario::load(opt.scenarioPath);
  if (!s.h || !s.phi)
    throw Error("scenario: 'check' needs both 'h11' and 'phi'");
  const std::uint64_t seed = opt.seedSet ? opt.seed : s.seed;
  std::mt19937_64 rng(seed);
  const TemporalMetric& h = *s.h;
  const SpatialMetric& phi = *s.phi;

  std::map<std::string, Record> rec;
  auto upd = [&rec](const std::string& name, double err, double tol) {
    Record& r = rec[name];
    r.maxError = std::max(r.maxError, err);
    r.tolerance = tol;
  };

  for (int trial = 0; trial < s.trials; ++trial) {
    JetChange c = s.change ? *s.change : randomJetChange(rng, s.n);
    JetPoint p = randomJetPoint(rng, s.n);
    logInfo("check trial " + std::to_string(trial));

    upd("adapted-coframe-law", checkAdaptedCoframeLaw(h, phi, c, p), 1e-8);
    upd("adapted-frame-law", checkAdaptedFrameLaw(h, phi, c, p), 1e-8);
    upd("spatial-christoffel-law", checkSpatialChristoffelLaw(phi, c, p), 1e-6);
    upd("spatial-semispray-law", checkSpatialSemisprayLaw(phi, c, p), 1e-7);
    upd("temporal-christoffel-law", checkTemporalChristoffelLaw(h, c, p), 1e-7);
    upd("temporal-connection-law", checkConnectionTemporalLaw(h, phi, c, p), 1e-7);
    upd("temporal-semispray-law", checkTemporalSemisprayLaw(h, c, p), 1e-7);

    if (s.corruptSpatialConnection) {
      ChangeFrame f = c.frame(p);
      MatrixXd N = canonicalConnection(h, phi).N(p);
      MatrixXd Nt = canonicalConnection(h.transformed(c.time), phi.transformed(c.space))
                        .N(f.image);
      upd("spatial-connection-law", relErr(Nt, MatrixXd(f.dti * f.J * N * f.Jinv)), 1e-7);
    } else {
      upd("spatial-connection-law", checkConnectionSpatialLaw(h, phi, c, p), 1e-7);
    }

    TemporalMetric ht = h.transformed(c.time);
    DTensorField liouF{{Slot::VelUp}, [](const JetPoint& q) { return liouville(q); }};
    DTensorField normF{{Slot::VelUp, Slot::TimeDown, Slot::SpaceDown},
                       [&h](const JetPoint& q) { return hNormalization(h, q); }};
    DTensorField hlF{{Slot::VelUp, Slot::TimeDown, Slot::TimeDown},
                     [&h](const JetPoint& q) { return hLiouville(h, q); }};
    DTensorField normT{{Slot::VelUp, Slot::TimeDown, Slot::SpaceDown},
                       [ht](const JetPoint& q) { return hNormalization(ht, q); }};
    DTensorField hlT{{Slot::VelUp, Slot::TimeDown, Slot::TimeDown},
                     [ht](const JetPoint& q) { return hLiouville(ht, q); }};
    double dte = checkDTensorLaw(liouF, liouF, c, p);
    dte = std::max(dte, checkDTensorLaw(normF, normT, c, p));
    dte = std::max(dte, checkDTensorLaw(hlF, hlT, c, p));
    upd("dtensor-law", dte, 1e-7);
  }
  return emitReport(opt.scenarioPath, seed, s.trials, rec);
}

int cmdElCompare(const Options& opt) {
  Scenario s = Scenario::load(opt.scenarioPath);
  if (!s.lagrangian || !s.h)
    throw Error("scenario: 'el-compare' needs 'lagrangian' and 'h11'");
  const std::uint64_t seed = opt.seedSet ? opt.seed : s.seed;
  std::mt19937_64 rng(seed);
  const int samples = std::max(s.trials, 100);

  std::map<std::string, Record> rec;
  rec["el-residual-corrected"].tolerance = 1e-9;
  rec["el-residual-paper-exact"] = {0.0, 1e-9, false};
  for (int trial = 0; trial < samples; ++trial) {
    JetPoint p = randomJetPoint(rng, s.n);
    for (auto variant : {BracketVariant::Corrected, BracketVariant::PaperExact}) {
      auto [H, G] = elSemisprays(*s.lagrangian, *s.h, p, variant);
      VectorXd a = -2.0 * H - 2.0 * G;
      VectorXd r = elResidual(*s.lagrangian, *s.h, p.t, p.x, p.y, a);
      double scale =
          1.0 + a.lpNorm<Eigen::Infinity>() + p.y.lpNorm<Eigen::Infinity>();
      double err = r.lpNorm<Eigen::Infinity>() / scale;
      Record& target = rec[variant == BracketVariant::Corrected
                               ? "el-residual-corrected"
                               : "el-residual-paper-exact"];
      target.maxError = std::max(target.maxError, err);
    }
  }
  return emitReport(opt.scenarioPath, seed, samples, rec);
}

int cmdConnection(const Options& opt) {
  Scenario s = Scenario::load(opt.scenarioPath);
  NonlinearConnection g;
  const BracketVariant variant =
      opt.paperExactBracket ? BracketVariant::PaperExact : BracketVariant::Corrected;
  if (s.lagrangian) {
    if (!s.h) throw Error("scenario: lagrangian connection needs 'h11'");
    g = connectionFromLagrangian(*s.lagrangian, *s.h, variant);
  } else if (s.h && s.phi) {
    g = canonicalConnection(*s.h, *s.phi);
  } else {
    throw Error("scenario: 'connection' needs 'h11' and 'phi' or a 'lagrangian'");
  }
  JetPoint p = s.hasInitial
                   ? JetPoint(s.t0, s.x0, s.v0)
                   : JetPoint(0.0, VectorXd::Zero(s.n), VectorXd::Ones(s.n));
  VectorXd M = g.M(p);
  MatrixXd N = g.N(p);
  json out;
  out["t"] = p.t;
  out["x"] = std::vector<double>(p.x.data(), p.x.data() + s.n);
  out["y"] = std::vector<double>(p.y.data(), p.y.data() + s.n);
  out["M"] = std::vector<double>(M.data(), M.data() + s.n);
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < s.n; ++j) {
    std::vector<double> row(s.n);
    for (int i = 0; i < s.n; ++i) row[i] = N(j, i);
    rows.push_back(row);
  }
  out["N"] = rows;
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.outPath.empty()) {
    file.open(opt.outPath, std::ios::binary);
    if (!file) throw Error("cannot open output file " + opt.outPath);
    os = &file;
  }
  *os << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jet-space geometry of time-dependent lagrangians"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  for (const char* name : {"integrate", "check", "el-compare", "connection"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("scenario", opt.scenarioPath, "scenario file (JSON)")->required();
    sub->add_option("--out", opt.outPath, "output path (default stdout)");
    sub->add_option("--seed", opt.seed, "RNG seed for property commands")
        ->each([&opt](const std::string&) { opt.seedSet = true; });
    sub->add_flag("--paper-exact-bracket", opt.paperExactBracket,
                  "use the paper-exact Euler-Lagrange bracket term");
    if (std::string(name) == "integrate")
      sub->add_option("--mode", opt.mode, "harmonic|autoparallel")
          ->check(CLI::IsMember({"harmonic", "autoparallel"}));
    sub->callback([&command, name]() { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (command == "integrate") return cmdIntegrate(opt);
    if (command == "check") return cmdCheck(opt);
    if (command == "el-compare") return cmdElCompare(opt);
    return cmdConnection(opt);
  } catch (const StepFailure& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const NonFiniteState& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const MetricDegenerateError& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateLagrangianError& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const SingularChangeError& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const QuadratureError& e) {
    std::cerr << "jetflow: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "jetflow: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "jetflow: " << e.what() << "\n";
    return 1;
  }
}
