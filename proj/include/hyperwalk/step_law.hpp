#pragma once

// Laws of the step variable x_n on (−1, 1) and the induced group parameter
// γ_n = log((1+x_n)/(1−x_n)).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace hyperwalk {

/// γ(x) = log((1+x)/(1−x)) = 2 artanh x.
inline double gamma_of_x(double x) { return 2.0 * std::atanh(x); }

/// x uniform on (−1, 1).  γ is then standard logistic.
struct UniformX {};

/// Triangular density on (−1, 1) with the given mode:
///   f(x) = (x+1)/(1+mode)  on (−1, mode],   (1−x)/(1−mode)  on (mode, 1).
struct Triangular {
  double mode;
};

/// Piecewise-linear quantile function through sorted (u, x) knots with
/// u_0 = 0, u_last = 1.  Flat runs (equal x) encode point masses.
struct InverseCdfTable {
  std::vector<std::pair<double, double>> knots;
};

class StepLaw {
 public:
  using variant_type = std::variant<UniformX, Triangular, InverseCdfTable>;

  StepLaw() : law_(UniformX{}) {}

  static StepLaw uniform() { return StepLaw(UniformX{}); }

  static StepLaw triangular(double mode) {
    if (!(mode > -1.0 && mode < 1.0)) throw ConfigError("triangular mode must lie in (-1, 1)");
    return StepLaw(Triangular{mode});
  }

  /// The drifting law of the simulation study: triangular with mode 0.1,
  /// E(γ₁) ≈ 0.0774.
  static StepLaw paper_triangular() { return triangular(0.1); }

  static StepLaw table(std::vector<std::pair<double, double>> knots) {
    validate_table(knots);
    return StepLaw(InverseCdfTable{std::move(knots)});
  }

  /// Point mass at x (a degenerate table); γ = γ(x) on every step.
  static StepLaw constant(double x) { return table({{0.0, x}, {1.0, x}}); }

  /// Parses "uniform", "paper-triangular", "triangular:<mode>", or
  /// "table:<path>" where the file holds "u,x" lines.
  static StepLaw parse(std::string_view spec) {
    if (spec == "uniform") return uniform();
    if (spec == "paper-triangular") return paper_triangular();
    if (spec.starts_with("triangular:")) {
      const auto rest = spec.substr(11);
      double mode = 0.0;
      const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), mode);
      if (ec != std::errc{} || ptr != rest.data() + rest.size()) {
        throw ConfigError("bad triangular mode: " + std::string(rest));
      }
      return triangular(mode);
    }
    if (spec.starts_with("table:")) return table(read_table(std::string(spec.substr(6))));
    throw ConfigError("unknown step law: " + std::string(spec));
  }

  const variant_type& variant() const { return law_; }

  std::string name() const {
    return std::visit(
        [](const auto& l) -> std::string {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, UniformX>) {
            return "uniform";
          } else if constexpr (std::is_same_v<L, Triangular>) {
            if (l.mode == 0.1) return "paper-triangular";
            std::ostringstream os;
            os << "triangular:" << l.mode;
            return os.str();
          } else {
            return "table(" + std::to_string(l.knots.size()) + " knots)";
          }
        },
        law_);
  }

  /// Quantile function Q(u) for u ∈ (0, 1).
  double quantile(double u) const {
    return std::visit(
        [u](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, UniformX>) {
            return 2.0 * u - 1.0;
          } else if constexpr (std::is_same_v<L, Triangular>) {
            const double split = (1.0 + l.mode) / 2.0;
            if (u <= split) return -1.0 + std::sqrt(2.0 * (1.0 + l.mode) * u);
            return 1.0 - std::sqrt(2.0 * (1.0 - l.mode) * (1.0 - u));
          } else {
            const auto& k = l.knots;
            auto it = std::upper_bound(k.begin(), k.end(), u,
                                       [](double v, const auto& knot) { return v < knot.first; });
            if (it == k.begin()) return k.front().second;
            if (it == k.end()) return k.back().second;
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double t = (u - lo.first) / (hi.first - lo.first);
            return lo.second + t * (hi.second - lo.second);
          }
        },
        law_);
  }

  double cdf(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return std::visit(
        [x](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, UniformX>) {
            return (x + 1.0) / 2.0;
          } else if constexpr (std::is_same_v<L, Triangular>) {
            if (x <= l.mode) return (x + 1.0) * (x + 1.0) / (2.0 * (1.0 + l.mode));
            return 1.0 - (1.0 - x) * (1.0 - x) / (2.0 * (1.0 - l.mode));
          } else {
            // Largest u with Q(u) <= x.
            const auto& k = l.knots;
            if (x < k.front().second) return 0.0;
            double best = 0.0;
            for (std::size_t i = 0; i + 1 < k.size(); ++i) {
              const auto [u0, x0] = k[i];
              const auto [u1, x1] = k[i + 1];
              if (x >= x1) {
                best = u1;
              } else if (x >= x0) {
                best = std::max(best, x1 == x0 ? u1 : u0 + (u1 - u0) * (x - x0) / (x1 - x0));
              }
            }
            return best;
          }
        },
        law_);
  }

  double sample_x(PhiloxStream& rng) const {
    if (std::holds_alternative<UniformX>(law_)) return rng.uniform_symmetric_open();
    return quantile(rng.uniform_open());
  }

 private:
  explicit StepLaw(variant_type law) : law_(std::move(law)) {}

  static void validate_table(const std::vector<std::pair<double, double>>& k) {
    if (k.size() < 2) throw ConfigError("inverse-CDF table needs at least two knots");
    if (k.front().first != 0.0 || k.back().first != 1.0) {
      throw ConfigError("inverse-CDF table must span u = 0 .. 1");
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (!(k[i].second > -1.0 && k[i].second < 1.0)) {
        throw ConfigError("inverse-CDF table values must lie strictly inside (-1, 1)");
      }
      if (i > 0 && !(k[i].first > k[i - 1].first)) {
        throw ConfigError("inverse-CDF table u must be strictly increasing");
      }
      if (i > 0 && k[i].second < k[i - 1].second) {
        throw ConfigError("inverse-CDF table x must be nondecreasing");
      }
    }
  }

  static std::vector<std::pair<double, double>> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open step-law table: " + path);
    std::vector<std::pair<double, double>> knots;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ConfigError("table line without comma: " + line);
      double u = 0, x = 0;
      const char* b = line.data();
      const char* e = b + line.size();
      auto r1 = std::from_chars(b, b + comma, u);
      auto r2 = std::from_chars(b + comma + 1, e, x);
      if (r1.ec != std::errc{} || r2.ec != std::errc{}) {
        throw ConfigError("unparsable table line: " + line);
      }
      knots.emplace_back(u, x);
    }
    return knots;
  }

  variant_type law_;
};

struct Step {
  double x;
  double gamma;
};

inline Step sample_step(const StepLaw& law, PhiloxStream& rng) {
  const double x = law.sample_x(rng);
  return {x, gamma_of_x(x)};
}

}  // namespace hyperwalk
