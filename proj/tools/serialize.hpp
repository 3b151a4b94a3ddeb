#pragma once

// JSON and CSV forms of the library types. Readers throw ParseError on
// malformed input; membership is left to the caller's validate().

#include <ostream>
#include <string>

#include <json.hpp>

#include "mkepler/dynamics.hpp"
#include "mkepler/lorentz.hpp"
#include "mkepler/orbits.hpp"

namespace mkepler::io {

using Json = nlohmann::ordered_json;

Json to_json(const Multivectord& x);
Multivectord multivector_from_json(const Json& j);

// Upper-triangle nonzeros with 1-based indices.
Json to_json(const SkewMatrixd& s);
SkewMatrixd skew_from_json(const Json& j);

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

// Row-major nested arrays.
Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json to_json(const State& s);
State state_from_json(const Json& j);

Json to_json(const OrbitElements& el);
OrbitElements elements_from_json(const Json& j);

Json to_json(const InitialData& data);

Json to_json(const LightConeOrbit& lc);
LightConeOrbit lightcone_from_json(const Json& j);

Json to_json(const LorentzTransform& t);
LorentzTransform transform_from_json(const Json& j);

Json to_json(const InvariantRecord& rec);
Json to_json(const DriftReport& d);
Json to_json(const ConicFit& fit);

/// Trajectory in the export schema. The conic residual of each sample is
/// taken against `elements` when given (empty column otherwise).
Json trajectory_json(const Trajectory& traj, const OrbitElements* elements);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const OrbitElements* elements);

/// Positions read back from either export format.
std::vector<Eigen::VectorXd> read_trajectory_positions(const std::string& text);

Json parse(const std::string& text);

}  // namespace mkepler::io
