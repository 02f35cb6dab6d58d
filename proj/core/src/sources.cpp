// Copyright 2026 The wavica Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wavica/sources.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "wavica/csv.hpp"
#include "wavica/error.hpp"
#include "wavica/random.hpp"

namespace wavica {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

std::string lowercase(std::string_view s) {
  std::string out(trim(s));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" +
                          std::string(text) + "'");
  }
  return v;
}

double draw(const Density& density, RandomStream& rng) {
  switch (density.kind) {
    case DensityKind::uniform:
      return rng.uniform();
    case DensityKind::exponential:
      return -std::log(rng.uniform()) / density.param;
    case DensityKind::student: {
      const double z = rng.normal();
      const double chi2 = 2.0 * rng.gamma(0.5 * density.param);
      return z / std::sqrt(chi2 / density.param);
    }
    case DensityKind::semicircular: {
      // x-coordinate of a uniform point in the disk.
      const double r = density.param * std::sqrt(rng.uniform());
      return r * std::cos(2.0 * std::numbers::pi * rng.uniform());
    }
    case DensityKind::pareto:
      return std::pow(rng.uniform(), -1.0 / density.param);
    case DensityKind::triangular: {
      const double u = rng.uniform();
      const double c = density.param;
      return u < c ? std::sqrt(u * c) : 1.0 - std::sqrt((1.0 - u) * (1.0 - c));
    }
    case DensityKind::normal:
      return rng.normal();
    case DensityKind::cauchy:
      return std::tan(std::numbers::pi * (rng.uniform() - 0.5));
  }
  return 0.0;
}

Eigen::MatrixXd planar_rotation(int d, double radians, int a, int b) {
  if (a < 0 || b < 0 || a >= d || b >= d || a == b) {
    throw InvalidArgument("rotation plane (" + std::to_string(a) + "," +
                          std::to_string(b) + ") invalid for d=" +
                          std::to_string(d));
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(d, d);
  r(a, a) = std::cos(radians);
  r(a, b) = -std::sin(radians);
  r(b, a) = std::sin(radians);
  r(b, b) = std::cos(radians);
  return r;
}

}  // namespace

Density Density::make(DensityKind kind) {
  switch (kind) {
    case DensityKind::student: return {kind, 3.0};
    case DensityKind::pareto: return {kind, 3.0};
    case DensityKind::semicircular: return {kind, 1.0};
    case DensityKind::triangular: return {kind, 0.5};
    case DensityKind::exponential: return {kind, 1.0};
    default: return {kind, 0.0};
  }
}

Density Density::make(DensityKind kind, double param) {
  Density d{kind, param};
  d.validate();
  return d;
}

void Density::validate() const {
  switch (kind) {
    case DensityKind::student:
    case DensityKind::pareto:
    case DensityKind::semicircular:
    case DensityKind::exponential:
      if (!(param > 0.0) || !std::isfinite(param)) {
        throw InvalidArgument(name() + " parameter must be positive, got " +
                              std::to_string(param));
      }
      break;
    case DensityKind::triangular:
      if (!(param >= 0.0 && param <= 1.0)) {
        throw InvalidArgument("triangular mode must lie in [0,1], got " +
                              std::to_string(param));
      }
      break;
    default:
      break;
  }
}

std::string Density::name() const {
  switch (kind) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::exponential: return "exponential";
    case DensityKind::student: return "student";
    case DensityKind::semicircular: return "semicircular";
    case DensityKind::pareto: return "pareto";
    case DensityKind::triangular: return "triangular";
    case DensityKind::normal: return "normal";
    case DensityKind::cauchy: return "cauchy";
  }
  return "unknown";
}

std::vector<DensityKind> all_density_kinds() {
  return {DensityKind::uniform,  DensityKind::exponential,
          DensityKind::student,  DensityKind::semicircular,
          DensityKind::pareto,   DensityKind::triangular,
          DensityKind::normal,   DensityKind::cauchy};
}

Density parse_density(std::string_view text) {
  const auto colon = text.find(':');
  const std::string key = lowercase(text.substr(0, colon));
  DensityKind kind;
  if (key == "uniform") kind = DensityKind::uniform;
  else if (key == "exponential" || key == "exp") kind = DensityKind::exponential;
  else if (key == "student" || key == "t") kind = DensityKind::student;
  else if (key == "semicircular" || key == "semi-circ" || key == "semicircle")
    kind = DensityKind::semicircular;
  else if (key == "pareto") kind = DensityKind::pareto;
  else if (key == "triangular") kind = DensityKind::triangular;
  else if (key == "normal" || key == "gaussian") kind = DensityKind::normal;
  else if (key == "cauchy") kind = DensityKind::cauchy;
  else throw InvalidArgument("unknown density '" + std::string(text) + "'");

  if (colon == std::string_view::npos) return Density::make(kind);
  return Density::make(kind, parse_number(text.substr(colon + 1), "density parameter"));
}

void apply_density_params(std::vector<Density>& densities, std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("density parameter '" + std::string(item) +
                            "' is not key=value");
    }
    const std::string key = lowercase(item.substr(0, eq));
    const double value = parse_number(item.substr(eq + 1), key);
    DensityKind target;
    if (key == "nu" || key == "dof") target = DensityKind::student;
    else if (key == "shape") target = DensityKind::pareto;
    else if (key == "radius") target = DensityKind::semicircular;
    else if (key == "mode" || key == "peak") target = DensityKind::triangular;
    else if (key == "rate") target = DensityKind::exponential;
    else throw InvalidArgument("unknown density parameter '" + key + "'");
    for (auto& d : densities) {
      if (d.kind == target) {
        d.param = value;
        d.validate();
      }
    }
  }
}

Eigen::MatrixXd sample_sources(std::span<const Density> densities, int d,
                               std::size_t n, std::uint64_t seed,
                               std::uint64_t replicate) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (n < 1) throw InvalidArgument("need at least one observation");
  if (densities.empty() ||
      (densities.size() != 1 && densities.size() != static_cast<std::size_t>(d))) {
    throw InvalidArgument("need one density, or one per coordinate (" +
                          std::to_string(d) + ")");
  }
  for (const auto& density : densities) density.validate();

  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), d);
  for (int l = 0; l < d; ++l) {
    const Density& density =
        densities.size() == 1 ? densities[0] : densities[static_cast<std::size_t>(l)];
    RandomStream rng(seed, "sources", replicate, static_cast<std::uint64_t>(l));
    for (std::size_t i = 0; i < n; ++i) {
      out(static_cast<Eigen::Index>(i), l) = draw(density, rng);
    }
  }
  return out;
}

MixingSpec MixingSpec::rotation(double degrees, int a, int b) {
  MixingSpec s;
  s.kind = Kind::rotation;
  s.angle_deg = degrees;
  s.plane_a = a;
  s.plane_b = b;
  return s;
}

MixingSpec MixingSpec::random() {
  MixingSpec s;
  s.kind = Kind::random;
  return s;
}

MixingSpec MixingSpec::explicit_matrix(Eigen::MatrixXd m) {
  MixingSpec s;
  s.kind = Kind::explicit_matrix;
  s.matrix = std::move(m);
  return s;
}

MixingSpec parse_mixing(std::string_view text) {
  const std::string lower = lowercase(text);
  if (lower == "identity" || lower == "none") return MixingSpec::identity();
  if (lower == "random") return MixingSpec::random();
  if (lower.rfind("file:", 0) == 0) {
    return MixingSpec::explicit_matrix(
        read_matrix_csv_file(std::string(text.substr(5))));
  }
  if (lower.rfind("rotation:", 0) == 0) {
    std::vector<std::string_view> parts;
    std::string_view rest = text.substr(9);
    while (true) {
      const auto c = rest.find(':');
      parts.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest = rest.substr(c + 1);
    }
    if (parts.size() != 1 && parts.size() != 3) {
      throw InvalidArgument("expected rotation:<deg> or rotation:<deg>:<a>:<b>");
    }
    const double deg = parse_number(parts[0], "rotation angle");
    if (parts.size() == 1) return MixingSpec::rotation(deg);
    return MixingSpec::rotation(deg,
                                static_cast<int>(parse_number(parts[1], "plane axis")),
                                static_cast<int>(parse_number(parts[2], "plane axis")));
  }
  throw InvalidArgument("unknown mixing '" + std::string(text) +
                        "'; expected identity, random, rotation:<deg> or file:<path>");
}

Eigen::MatrixXd make_mixing(const MixingSpec& spec, int d, std::uint64_t seed,
                            std::uint64_t replicate) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  switch (spec.kind) {
    case MixingSpec::Kind::identity:
      return Eigen::MatrixXd::Identity(d, d);
    case MixingSpec::Kind::rotation:
      return planar_rotation(d, spec.angle_deg * std::numbers::pi / 180.0,
                             spec.plane_a, spec.plane_b);
    case MixingSpec::Kind::random: {
      RandomStream rng(seed, "mixing", replicate);
      Eigen::MatrixXd g(d, d);
      for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) g(r, c) = rng.normal();
      }
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
      const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int c = 0; c < d; ++c) {
        if (r(c, c) < 0.0) q.col(c) = -q.col(c);
      }
      if (q.determinant() < 0.0) q.col(0) = -q.col(0);
      return q;
    }
    case MixingSpec::Kind::explicit_matrix: {
      if (spec.matrix.rows() != d || spec.matrix.cols() != d) {
        throw InvalidArgument("explicit mixing matrix is " +
                              std::to_string(spec.matrix.rows()) + "x" +
                              std::to_string(spec.matrix.cols()) +
                              ", expected " + std::to_string(d) + "x" +
                              std::to_string(d));
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(spec.matrix);
      if (!lu.isInvertible()) {
        throw InvalidArgument("explicit mixing matrix is singular");
      }
      return spec.matrix;
    }
  }
  return Eigen::MatrixXd::Identity(d, d);
}

Eigen::MatrixXd mix(const Eigen::MatrixXd& sources, const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.cols() != sources.cols()) {
    throw InvalidArgument("mix: sources have " + std::to_string(sources.cols()) +
                          " columns but mixing matrix is " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  return sources * a.transpose();
}

}  // namespace wavica
