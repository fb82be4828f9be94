#pragma once

// Envelope models for the initial correlations Cor(S_i(r) : S_j(r)) between two
// disjoint balls. Each model returns an upper bound on the maximal connected
// correlation of norm-1 observables supported on the balls, capped at 1.

#include <string_view>
#include <variant>

namespace lrcorr {

struct ProductModel {
  friend bool operator==(const ProductModel&, const ProductModel&) = default;
};

// One maximally entangled pair at sites p != q, product state elsewhere.
struct BellPairModel {
  int p;
  int q;
  friend bool operator==(const BellPairModel&, const BellPairModel&) = default;
};

// Worst-pair envelope c1 / (closest-pair distance)^chi.
struct PowerLawClusteredModel {
  double c1;
  double chi;
  friend bool operator==(const PowerLawClusteredModel&, const PowerLawClusteredModel&) = default;
};

// Worst-pair envelope c0 exp(-(closest-pair distance) / xi).
struct ExpClusteredModel {
  double c0;
  double xi;
  friend bool operator==(const ExpClusteredModel&, const ExpClusteredModel&) = default;
};

class CorModel {
 public:
  using Variant =
      std::variant<ProductModel, BellPairModel, PowerLawClusteredModel, ExpClusteredModel>;

  static CorModel product();
  static CorModel bell_pair(int p, int q);
  static CorModel power_law(double c1, double chi);
  static CorModel exp_clustered(double c0, double xi);

  const Variant& variant() const { return variant_; }
  std::string_view name() const;

  friend bool operator==(const CorModel&, const CorModel&) = default;

 private:
  explicit CorModel(Variant v) : variant_(v) {}
  Variant variant_;
};

// Requires disjoint balls: 2r < |i - j|. Throws ValidationError otherwise.
double cor_between_balls(const CorModel& model, int i, int j, int r);

}  // namespace lrcorr
