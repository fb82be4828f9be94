#include "lrcorr/init_corr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "lrcorr/errors.hpp"

namespace lrcorr {

CorModel CorModel::product() { return CorModel(ProductModel{}); }

CorModel CorModel::bell_pair(int p, int q) {
  if (p == q) throw ValidationError("bell pair sites must differ");
  return CorModel(BellPairModel{p, q});
}

CorModel CorModel::power_law(double c1, double chi) {
  if (!(c1 >= 0.0) || !std::isfinite(c1)) throw ValidationError("power_law c1 must be >= 0");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw ValidationError("power_law chi must be >= 0");
  return CorModel(PowerLawClusteredModel{c1, chi});
}

CorModel CorModel::exp_clustered(double c0, double xi) {
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw ValidationError("exp_clustered c0 must be >= 0");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("exp_clustered xi must be > 0");
  return CorModel(ExpClusteredModel{c0, xi});
}

std::string_view CorModel::name() const {
  struct Namer {
    std::string_view operator()(const ProductModel&) const { return "product"; }
    std::string_view operator()(const BellPairModel&) const { return "bell_pair"; }
    std::string_view operator()(const PowerLawClusteredModel&) const { return "power_law"; }
    std::string_view operator()(const ExpClusteredModel&) const { return "exp_clustered"; }
  };
  return std::visit(Namer{}, variant_);
}

double cor_between_balls(const CorModel& model, int i, int j, int r) {
  const int dist = std::abs(i - j);
  if (r < 0 || 2 * r >= dist) {
    throw ValidationError("balls of radius " + std::to_string(r) + " around sites " +
                          std::to_string(i) + " and " + std::to_string(j) + " overlap");
  }
  // Closest pair of sites between S_i(r) and S_j(r).
  const double gap = dist - 2 * r;

  struct Envelope {
    int i, j, r;
    double gap;
    double operator()(const ProductModel&) const { return 0.0; }
    double operator()(const BellPairModel& m) const {
      // Closed balls: a site on the boundary (distance == r) is inside.
      auto in_ball = [this](int site, int center) { return std::abs(site - center) <= r; };
      const bool straddles = (in_ball(m.p, i) && in_ball(m.q, j)) ||
                             (in_ball(m.p, j) && in_ball(m.q, i));
      return straddles ? 1.0 : 0.0;
    }
    double operator()(const PowerLawClusteredModel& m) const {
      return std::min(1.0, m.c1 / std::pow(gap, m.chi));
    }
    double operator()(const ExpClusteredModel& m) const {
      return std::min(1.0, m.c0 * std::exp(-gap / m.xi));
    }
  };
  return std::visit(Envelope{i, j, r, gap}, model.variant());
}

}  // namespace lrcorr
