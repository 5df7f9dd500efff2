#include "nbarrier/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "nbarrier/errors.hpp"

namespace nbarrier {
namespace {

const json& require(const json& j, const char* field) {
  if (!j.contains(field)) throw ValidationError(std::string("missing field '") + field + "'");
  return j.at(field);
}

double number(const json& j, const char* field) {
  if (!j.is_number()) throw ValidationError(std::string("field '") + field + "' must be a number");
  return j.get<double>();
}

const char* kind_name(BarrierKind k) { return k == BarrierKind::lower ? "lower" : "upper"; }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw ValidationError(std::string("field '") + field + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], field);
  return v;
}

LVSystem system_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("system must be a JSON object");
  const Eigen::VectorXd sigma = vector_from_json(require(j, "sigma"), "sigma");
  const auto n = sigma.size();
  if (j.contains("n")) {
    const json& jn = j.at("n");
    if (!jn.is_number_integer() || jn.get<long long>() != n) {
      throw ValidationError("field 'n' must be an integer equal to the length of 'sigma'");
    }
  }
  const Eigen::VectorXd d = vector_from_json(require(j, "d"), "d");
  const json& jc = require(j, "c");
  if (!jc.is_array() || static_cast<Eigen::Index>(jc.size()) != n) {
    throw ValidationError("field 'c' must be an n x n array");
  }
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::VectorXd row = vector_from_json(jc[static_cast<std::size_t>(r)], "c");
    if (row.size() != n) throw ValidationError("field 'c' must be an n x n array");
    c.row(r) = row.transpose();
  }
  const Eigen::VectorXd m =
      j.contains("m") ? vector_from_json(j.at("m"), "m") : Eigen::VectorXd::Ones(n);
  const double theta = j.contains("theta") ? number(j.at("theta"), "theta") : 0.0;
  return LVSystem(d, sigma, c, m, theta);
}

LVSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open system file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("system file '" + path + "' is not valid JSON: " + e.what());
  }
  return system_from_json(j);
}

void to_json(json& j, const LVSystem& sys) {
  json c = json::array();
  for (int r = 0; r < sys.n(); ++r) c.push_back(vector_to_json(sys.c().row(r).transpose()));
  j = json{{"n", sys.n()},
           {"d", vector_to_json(sys.d())},
           {"sigma", vector_to_json(sys.sigma())},
           {"c", c},
           {"m", vector_to_json(sys.m())},
           {"theta", sys.theta()}};
}

void to_json(json& j, const Equilibrium& e) {
  std::vector<int> support;
  for (int i : e.support) support.push_back(i + 1);
  j = json{{"point", vector_to_json(e.point.values())}, {"support", support}};
}

void to_json(json& j, const EquilibriumSet& set) {
  j = json{{"points", set.points}, {"diagnostics", set.diagnostics}};
}

void to_json(json& j, const HypothesisBox& box) {
  j = json{{"u_lower", vector_to_json(box.lower())}, {"u_upper", vector_to_json(box.upper())}};
}

void to_json(json& j, const HypothesisReport& report) {
  j = json{{"holds", report.holds},
           {"inner_checked", report.inner_checked},
           {"outer_checked", report.outer_checked}};
  if (report.witness) {
    const auto& w = *report.witness;
    j["witness"] = {{"region", w.region == HypothesisWitness::Region::inner ? "inner" : "outer"},
                    {"point", vector_to_json(w.point)},
                    {"species", w.species + 1},
                    {"growth", w.growth}};
  } else {
    j["witness"] = nullptr;
  }
}

void to_json(json& j, const Bounds& b) {
  j = json{{"lambda_lower", b.lambda_lower}, {"lambda_upper", b.lambda_upper}, {"chi", b.chi}};
}

void to_json(json& j, const BarrierTriple& t) {
  j = json{{"kind", kind_name(t.kind)},
           {"alpha", vector_to_json(t.alpha)},
           {"lambda1", t.lambda1},
           {"eta", t.eta},
           {"lambda2", t.lambda2}};
}

void to_json(json& j, const TangencyResult& r) {
  j = json{{"case_id", to_string(r.case_id)},
           {"lambda2", r.lambda2},
           {"touch_point", {r.touch_u, r.touch_v}}};
  if (r.aux) {
    const auto& q = *r.aux;
    j["aux"] = {{"A", q.A}, {"B", q.B}, {"C", q.C}, {"D", q.D},
                {"E", q.E}, {"J", q.J}, {"G", q.G}, {"X", q.X}};
  } else {
    j["aux"] = nullptr;
  }
}

void to_json(json& j, const ImprovedBound& b) {
  j = json{{"lambda2", b.lambda2}, {"eta", b.eta}, {"lambda1", b.lambda1}, {"bound", b.bound}};
}

void to_json(json& j, const BoundComparison& c) {
  j = json{{"baseline", c.baseline},
           {"improved", c.improved},
           {"polyhedral", c.polyhedral},
           {"ratio", c.ratio}};
}

void to_json(json& j, const NonexistenceCertificate& c) {
  j = json{{"h1_holds", c.h1_holds},
           {"sigma_tilde", c.sigma_tilde},
           {"h2_holds", c.h2_holds},
           {"h2_lhs", c.h2_lhs},
           {"h2_rhs", c.h2_rhs},
           {"alpha_star", c.alpha_star},
           {"verdict", to_string(c.verdict)}};
}

void to_json(json& j, const BoundsReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"x", v.x},
                          {"value", v.value},
                          {"quantity", v.quantity == BoundViolation::Quantity::p ? "p" : "q"},
                          {"bound", v.side == BoundViolation::Side::lower ? "lower" : "upper"}});
  }
  j = json{{"alpha", vector_to_json(r.alpha)},
           {"p_min", r.p_min},
           {"p_max", r.p_max},
           {"lambda_lower", r.lambda_lower},
           {"lambda_upper", r.lambda_upper},
           {"tol", r.tol},
           {"violations", violations},
           {"pass", r.pass}};
  if (r.barrier) {
    j["barrier"] = {{"q_min", r.barrier->q_min},
                    {"q_max", r.barrier->q_max},
                    {"lower_lambda1", r.barrier->lower_lambda1},
                    {"upper_lambda1", r.barrier->upper_lambda1}};
  }
}

void to_json(json& j, const ContainmentResult& r) {
  j = json{{"contained", r.contained}};
  if (r.witness) {
    j["witness"] = {{"u", r.witness->u}, {"v", r.witness->v}, {"H", r.witness->h}};
  } else {
    j["witness"] = nullptr;
  }
}

void to_json(json& j, const SolveDiagnostics& d) {
  j = json{{"iterations", d.iterations}, {"final_norm", d.final_norm}, {"history", d.history}};
}

void write_profile_csv(std::ostream& os, const WaveProfile& profile) {
  os << 'x';
  for (int i = 0; i < profile.species(); ++i) os << ",u" << i + 1;
  os << '\n';
  for (int j = 0; j < profile.points(); ++j) {
    os << format_double(profile.x[j]);
    for (int i = 0; i < profile.species(); ++i) os << ',' << format_double(profile.values(i, j));
    os << '\n';
  }
}

WaveProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("profile CSV is empty");
  if (line.rfind("x,", 0) != 0) throw ValidationError("profile CSV header must start with 'x,'");
  const auto cols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  const int n = cols - 1;

  std::vector<double> xs;
  std::vector<double> vals;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (int c = 0; c < cols; ++c) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) {
        throw ValidationError("profile CSV row " + std::to_string(row) + " is malformed");
      }
      (c == 0 ? xs : vals).push_back(v);
      p = res.ptr;
      if (c + 1 < cols) {
        if (p == end || *p != ',') {
          throw ValidationError("profile CSV row " + std::to_string(row) + " has too few columns");
        }
        ++p;
      }
    }
    if (p != end && *p != '\r') {
      throw ValidationError("profile CSV row " + std::to_string(row) + " has too many columns");
    }
  }
  if (xs.size() < 2) throw ValidationError("profile CSV needs at least two rows");

  WaveProfile prof;
  const auto npts = static_cast<Eigen::Index>(xs.size());
  prof.x = Eigen::Map<Eigen::VectorXd>(xs.data(), npts);
  prof.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>>(
      vals.data(), n, npts);
  prof.e_minus = prof.values.col(0);
  prof.e_plus = prof.values.col(npts - 1);
  return prof;
}

json profile_metadata(const WaveProfile& profile) {
  const double h = profile.spacing();
  const double half = profile.points() > 1 ? 0.5 * (profile.x[profile.points() - 1] - profile.x[0]) : 0.0;
  return json{{"theta", profile.theta},
              {"L", half},
              {"h", h},
              {"residual_norm", profile.residual_norm},
              {"e_minus", vector_to_json(profile.e_minus)},
              {"e_plus", vector_to_json(profile.e_plus)}};
}

void apply_profile_metadata(WaveProfile& profile, const json& meta) {
  if (meta.contains("theta")) profile.theta = number(meta.at("theta"), "theta");
  if (meta.contains("residual_norm")) {
    profile.residual_norm = number(meta.at("residual_norm"), "residual_norm");
  }
  if (meta.contains("e_minus")) profile.e_minus = vector_from_json(meta.at("e_minus"), "e_minus");
  if (meta.contains("e_plus")) profile.e_plus = vector_from_json(meta.at("e_plus"), "e_plus");
}

}  // namespace nbarrier
