#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nbarrier/barrier.hpp"
#include "nbarrier/model.hpp"
#include "nbarrier/nonexistence.hpp"
#include "nbarrier/tangent.hpp"
#include "nbarrier/verify.hpp"
#include "nbarrier/waves.hpp"

namespace nbarrier {

using json = nlohmann::json;

/// Parses {"n", "d", "sigma", "c", "m", "theta"}; "m" and "theta" are
/// optional and unknown keys are ignored. Errors name the offending field.
LVSystem system_from_json(const json& j);
LVSystem load_system(const std::string& path);

void to_json(json& j, const LVSystem& sys);
void to_json(json& j, const Equilibrium& e);
void to_json(json& j, const EquilibriumSet& set);
void to_json(json& j, const HypothesisBox& box);
void to_json(json& j, const HypothesisReport& report);
void to_json(json& j, const Bounds& b);
void to_json(json& j, const BarrierTriple& t);
void to_json(json& j, const TangencyResult& r);
void to_json(json& j, const ImprovedBound& b);
void to_json(json& j, const BoundComparison& c);
void to_json(json& j, const NonexistenceCertificate& c);
void to_json(json& j, const BoundsReport& r);
void to_json(json& j, const ContainmentResult& r);
void to_json(json& j, const SolveDiagnostics& d);

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const char* field);

/// Header `x,u1,...,un`, one row per grid point, values at full precision.
void write_profile_csv(std::ostream& os, const WaveProfile& profile);
/// Reads the CSV written above. Boundary states are taken from the first
/// and last rows; theta and residual_norm are left at 0.
WaveProfile read_profile_csv(std::istream& is);

/// Sidecar with theta, L, h, residual_norm, e_minus and e_plus.
json profile_metadata(const WaveProfile& profile);
/// Applies theta and residual_norm from a sidecar to a profile read from CSV.
void apply_profile_metadata(WaveProfile& profile, const json& meta);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace nbarrier
