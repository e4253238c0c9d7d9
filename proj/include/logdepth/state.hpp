// Copyright 2026 The logdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "logdepth/linalg.hpp"

namespace logdepth {

/// Absolute tolerances. State invariants use `state`; algebraic identities
/// in tests use `identity`.
struct Tolerances {
  double state = 1e-10;
  double identity = 1e-12;
};

struct PureState {
  std::size_t width = 0;
  Vector amps;

  std::size_t dim() const { return static_cast<std::size_t>(amps.size()); }

  static PureState basis(std::size_t width, std::uint64_t index) {
    PureState s{width, Vector::Zero(Eigen::Index{1} << width)};
    s.amps(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  /// Wraps a vector, checking the dimension and norm.
  static PureState from(Vector v, double tol = Tolerances{}.state) {
    std::size_t w = 0;
    while ((Eigen::Index{1} << w) < v.size()) ++w;
    if ((Eigen::Index{1} << w) != v.size()) throw Error("PureState: dimension is not a power of two");
    if (std::abs(v.squaredNorm() - 1.0) > tol) throw Error("PureState: vector is not normalized");
    return {w, std::move(v)};
  }

  Matrix projector() const { return amps * amps.adjoint(); }
};

struct DensityMatrix {
  std::size_t width = 0;
  Matrix m;

  std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }

  static DensityMatrix from(const PureState& p) { return {p.width, p.projector()}; }

  static DensityMatrix maximally_mixed(std::size_t width) {
    const auto d = Eigen::Index{1} << width;
    return {width, Matrix::Identity(d, d) / static_cast<double>(d)};
  }
};

/// Reasons a matrix fails the density invariants; empty when it passes.
inline std::string density_violation(const Matrix& m, double tol = Tolerances{}.state) {
  if (m.rows() != m.cols()) return "not square";
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return "not Hermitian";
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol) return "trace is not one";
  if (min_eigenvalue(m) < -tol) return "not positive semidefinite";
  return {};
}

inline bool is_density(const Matrix& m, double tol = Tolerances{}.state) { return density_violation(m, tol).empty(); }

/// Haar-random pure state; deterministic in (width, seed).
inline PureState random_pure(std::size_t width, std::uint64_t seed) {
  if (width < 1) throw Error("random_pure: width must be at least 1");
  Rng rng(mix_seed(seed, 0x5055));
  return {width, random_unit_vector(std::size_t{1} << width, rng)};
}

/// Full-rank random density from a normalized Wishart sample.
inline DensityMatrix random_density(std::size_t width, std::uint64_t seed) {
  if (width < 1) throw Error("random_density: width must be at least 1");
  Rng rng(mix_seed(seed, 0xD3D5));
  return {width, random_density_matrix(std::size_t{1} << width, rng)};
}

// ---------------------------------------------------------------------------
// State documents: {"width": w, "kind": "pure"|"density",
//                   "entries": [[re, im], ...]} with density entries row-major.

using AnyState = std::variant<PureState, DensityMatrix>;

inline nlohmann::ordered_json write_state(const AnyState& s) {
  nlohmann::ordered_json doc;
  auto pair = [](cplx z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); };
  auto entries = nlohmann::ordered_json::array();
  if (const auto* p = std::get_if<PureState>(&s)) {
    doc["width"] = p->width;
    doc["kind"] = "pure";
    for (Eigen::Index i = 0; i < p->amps.size(); ++i) entries.push_back(pair(p->amps(i)));
  } else {
    const auto& d = std::get<DensityMatrix>(s);
    doc["width"] = d.width;
    doc["kind"] = "density";
    for (Eigen::Index r = 0; r < d.m.rows(); ++r) {
      for (Eigen::Index c = 0; c < d.m.cols(); ++c) entries.push_back(pair(d.m(r, c)));
    }
  }
  doc["entries"] = std::move(entries);
  return doc;
}

inline AnyState read_state(const nlohmann::ordered_json& doc) {
  for (const char* f : {"width", "kind", "entries"}) {
    if (!doc.contains(f)) throw Error(std::string("state document: missing field \"") + f + "\"");
  }
  const auto width = doc["width"].get<std::size_t>();
  const auto kind = doc["kind"].get<std::string>();
  const auto& e = doc["entries"];
  const std::size_t d = std::size_t{1} << width;
  auto entry = [&](std::size_t i) {
    const auto& z = e.at(i);
    if (!z.is_array() || z.size() != 2) throw Error("state document: entries must be [re, im] pairs");
    return cplx(z[0].get<double>(), z[1].get<double>());
  };
  if (kind == "pure") {
    if (e.size() != d) throw Error("state document: expected " + std::to_string(d) + " entries");
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) v(i) = entry(i);
    return PureState::from(std::move(v));
  }
  if (kind == "density") {
    if (e.size() != d * d) throw Error("state document: expected " + std::to_string(d * d) + " entries");
    Matrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) m(r, c) = entry(r * d + c);
    }
    if (auto why = density_violation(m); !why.empty()) throw Error("state document: density " + why);
    return DensityMatrix{width, std::move(m)};
  }
  throw Error("state document: unknown kind \"" + kind + "\"");
}

inline AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_state(nlohmann::ordered_json::parse(ss.str()));
}

inline DensityMatrix as_density(const AnyState& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return DensityMatrix::from(*p);
  return std::get<DensityMatrix>(s);
}

}  // namespace logdepth
