#pragma once

// JSON and CSV serialization. A complex matrix is a JSON array of rows whose
// entries are [re, im] pairs; trajectories store each node as a flat
// row-major list of such pairs.

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "finsler/flow.hpp"
#include "finsler/shooting.hpp"
#include "finsler/spectral.hpp"

namespace finsler::io {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& x);

/// Parses the row/pair layout. Throws ErrorKind::parse on malformed input.
Matrix matrix_from_json(const Json& j);

/// "identity", "zero" (both need n > 0), or an inline JSON literal.
Matrix parse_matrix_literal(std::string_view text, Eigen::Index n);

Matrix read_matrix_file(const std::string& path);

Json report_to_json(const flow::ConservationReport& rep);
Json trajectory_to_json(const flow::Trajectory& traj);
Json bvp_to_json(const shooting::BvpResult& r, bool include_trajectory = true);
Json equivariance_to_json(const spectral::EquivarianceReport& rep);

/// Which per-node matrix a CSV export carries.
enum class Stream { g, v, w };

Stream parse_stream(std::string_view name);

/// Header "t,re(x_11),im(x_11),..." then one row per node.
void write_trajectory_csv(std::ostream& os, const flow::Trajectory& traj, Stream stream);

}  // namespace finsler::io
