#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mproj/exactla.hpp"
#include "mproj/ring.hpp"

namespace mproj {

enum class ComponentKind { Reduced, Tangent, Double };

std::string to_string(ComponentKind k);
// Throws std::invalid_argument on an unknown name.
ComponentKind parse_kind(const std::string& s);

struct LocalComponent {
  ComponentKind kind = ComponentKind::Reduced;
  Point point;
  // Tangent only: one block of n_i entries per factor, indexed by the
  // coordinates other than the chart coordinate of that factor.
  std::vector<Elem> direction;

  std::size_t degree(const Space& x) const;
  bool operator==(const LocalComponent&) const = default;
};

// Index of the last nonzero coordinate.
std::size_t chart_index(std::span<const Elem> coords);
// Every factor rescaled so its chart coordinate is 1.
Point normalize(const PrimeField& f, const Point& p);
bool same_point(const PrimeField& f, const Point& a, const Point& b);

// Homogeneous tangent direction in factor i for a tangent component:
// the chart block lifted with a zero at the chart coordinate, scaled by the
// chart coordinate of the stored representative.
std::vector<Elem> homogeneous_direction(const PrimeField& f, const Space& x, const LocalComponent& c,
                                        std::size_t i);

class ZeroScheme {
 public:
  // Points are normalized. Throws DimensionMismatch / std::invalid_argument
  // on malformed components or repeated supports.
  ZeroScheme(Space x, PrimeField f, std::vector<LocalComponent> components);
  // Keeps the coordinates as given (any nonzero representative).
  static ZeroScheme from_representatives(Space x, PrimeField f, std::vector<LocalComponent> components);

  const Space& space() const noexcept { return space_; }
  const PrimeField& field() const noexcept { return field_; }
  const std::vector<LocalComponent>& components() const noexcept { return comps_; }
  std::size_t size() const noexcept { return comps_.size(); }
  bool empty() const noexcept { return comps_.empty(); }
  std::size_t degree() const noexcept { return degree_; }
  std::vector<Point> support() const;

  bool operator==(const ZeroScheme& o) const {
    return space_ == o.space_ && field_ == o.field_ && comps_ == o.comps_;
  }

 private:
  ZeroScheme(Space x, PrimeField f, std::vector<LocalComponent> components, bool normalize_points);

  Space space_;
  PrimeField field_;
  std::vector<LocalComponent> comps_;
  std::size_t degree_ = 0;
};

std::size_t degree(const ZeroScheme& z);

// Components of both; throws std::invalid_argument if supports overlap.
ZeroScheme disjoint_union(const ZeroScheme& a, const ZeroScheme& b);

ZeroScheme random_general(const Space& x, std::size_t s, ComponentKind kind, std::uint64_t seed,
                          const PrimeField& f = PrimeField());
// All supports have factor i equal to p. Tangent directions are drawn
// inside the fiber. Double components throw Unsupported.
ZeroScheme random_in_fiber(const Space& x, std::size_t i, const std::vector<Elem>& p, std::size_t s,
                           std::uint64_t seed, const PrimeField& f = PrimeField(),
                           ComponentKind kind = ComponentKind::Reduced);
// Random kinds, total degree at most max_degree (uniform target in [0, max_degree]).
ZeroScheme random_mixed(const Space& x, std::size_t max_degree, std::uint64_t seed,
                        const PrimeField& f = PrimeField());

// Residual with respect to the pullback of the hyperplane {h = 0} of factor i.
ZeroScheme residual(const ZeroScheme& z, std::size_t i, const std::vector<Elem>& h);

nlohmann::json to_json(const ZeroScheme& z);
// Throws FormatError naming the offending field.
ZeroScheme scheme_from_json(const nlohmann::json& j, const PrimeField& f = PrimeField());

}  // namespace mproj
