#pragma once

// JSON matrix and report serialisation.
//
// Matrix format: {"dim": d, "re": [[...], ...], "im": [[...], ...]}, rows
// outermost. Writers emit the full matrix; readers check Hermiticity.

#include "rw/measures.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>

namespace rw::io {

using nlohmann::json;

inline json to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline json to_json(const HermitianMatrix& h) { return to_json(h.matrix()); }
inline json to_json(const DensityMatrix& rho) { return to_json(rho.matrix()); }

/// Throws std::domain_error on malformed input or a non-Hermitian matrix.
inline HermitianMatrix hermitian_from_json(const json& j, double tol = 1e-9) {
  try {
    const int d = j.at("dim").get<int>();
    const auto& re = j.at("re");
    const json im = j.contains("im") ? j.at("im") : json();
    if (d < 1 || !re.is_array() || static_cast<int>(re.size()) != d ||
        (!im.is_null() && static_cast<int>(im.size()) != d)) {
      throw std::domain_error("matrix JSON: shape does not match dim");
    }
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(re[i].size()) != d || (!im.is_null() && static_cast<int>(im[i].size()) != d)) {
        throw std::domain_error("matrix JSON: row " + std::to_string(i) + " has wrong length");
      }
      for (int k = 0; k < d; ++k) {
        m(i, k) = Complex(re[i][k].get<double>(), im.is_null() ? 0.0 : im[i][k].get<double>());
      }
    }
    return HermitianMatrix(m, tol);
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("matrix JSON: ") + e.what());
  }
}

inline DensityMatrix density_from_json(const json& j) { return DensityMatrix(hermitian_from_json(j)); }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::domain_error(path + ": " + e.what());
  }
}

inline const char* to_string(MeasureKind k) { return k == MeasureKind::weight ? "weight" : "robustness"; }

inline json to_json(const std::string& measure, const MeasureReport& r) {
  json j = {{"measure", measure},
            {"kind", to_string(r.kind)},
            {"value", r.value},
            {"gap", r.gap},
            {"iterations", r.iterations},
            {"shortcut", r.shortcut},
            {"free", r.is_free}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (r.free_state) j["free_state"] = to_json(*r.free_state);
  if (r.residual_state) j["residual_state"] = to_json(*r.residual_state);
  return j;
}

}  // namespace rw::io
