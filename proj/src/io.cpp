#include "finsler/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace finsler::io {

namespace {

Json flat_pairs(const Matrix& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.push_back({x(i, j).real(), x(i, j).imag()});
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::parse, msg); }

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    parse_error("matrix entry must be [re, im]");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

Json matrix_to_json(const Matrix& x) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back({x(i, j).real(), x(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_error("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) parse_error("matrix rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      parse_error("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(i, c) = entry_from_json(row[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

Matrix parse_matrix_literal(std::string_view text, Eigen::Index n) {
  if (text == "identity" || text == "zero") {
    if (n < 1) parse_error("identity/zero literals need --N >= 1");
    return text == "identity" ? linalg::identity(n) : Matrix::Zero(n, n);
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("invalid matrix literal: ") + e.what());
  }
  return matrix_from_json(j);
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open matrix file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix_literal(buf.str(), 0);
}

Json report_to_json(const flow::ConservationReport& rep) {
  return Json{{"spectrum_drift", rep.spectrum_drift},
              {"skew_drift", rep.skew_drift},
              {"speed_drift", rep.speed_drift},
              {"momentum_norm_drift", rep.momentum_norm_drift},
              {"multiplicity_stable", rep.multiplicity_stable},
              {"rank_stable", rep.rank_stable}};
}

Json trajectory_to_json(const flow::Trajectory& traj) {
  Json g = Json::array();
  Json v = Json::array();
  Json w = Json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    g.push_back(flat_pairs(traj.g[k]));
    v.push_back(flat_pairs(traj.v[k]));
    w.push_back(flat_pairs(traj.w[k].value));
  }
  const auto n = traj.size() > 0 ? traj.g.front().rows() : 0;
  return Json{{"metric", {{"p", traj.metric.p()}}},
              {"N", n},
              {"times", traj.times},
              {"g", std::move(g)},
              {"v", std::move(v)},
              {"w", std::move(w)},
              {"diagnostics", report_to_json(traj.diagnostics)}};
}

Json bvp_to_json(const shooting::BvpResult& r, bool include_trajectory) {
  Json out = include_trajectory ? trajectory_to_json(r.trajectory) : Json::object();
  out["distance"] = r.distance;
  out["converged"] = r.converged;
  out["endpoint_residual"] = r.endpoint_residual;
  out["iters"] = r.iterations;
  out["v0"] = matrix_to_json(r.v0);
  return out;
}

Json equivariance_to_json(const spectral::EquivarianceReport& rep) {
  return Json{{"gamma_max", rep.gamma_max},
              {"spectrum_drift", rep.spectrum_drift},
              {"multiplicity_stable", rep.multiplicity_stable},
              {"transport_deviation", rep.transport_deviation},
              {"modulus_deviation", rep.modulus_deviation},
              {"isometry_ranks_stable", rep.isometry_ranks_stable},
              {"frame_ok", rep.frame_ok}};
}

Stream parse_stream(std::string_view name) {
  if (name == "g") return Stream::g;
  if (name == "v") return Stream::v;
  if (name == "w") return Stream::w;
  parse_error("stream must be one of g, v, w");
}

void write_trajectory_csv(std::ostream& os, const flow::Trajectory& traj, Stream stream) {
  if (traj.size() == 0) return;
  const char* name = stream == Stream::g ? "g" : stream == Stream::v ? "v" : "w";
  const Eigen::Index n = traj.g.front().rows();
  const std::string sep = n > 9 ? "_" : "";
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (Eigen::Index j = 1; j <= n; ++j) {
      std::ostringstream idx;
      idx << name << '_' << i << sep << j;
      os << ",re(" << idx.str() << "),im(" << idx.str() << ')';
    }
  }
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Matrix& x = stream == Stream::g   ? traj.g[k]
                      : stream == Stream::v ? traj.v[k]
                                            : traj.w[k].value;
    os << traj.times[k];
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) os << ',' << x(i, j).real() << ',' << x(i, j).imag();
    }
    os << '\n';
  }
}

}  // namespace finsler::io
