#pragma once

// Problem definitions: angular sectors, the potential catalog, regularity
// classes and theorem preconditions.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace dirac {

// Exact half-integer stored as twice its value (j = 3/2 -> 3).
class HalfInteger {
 public:
  static HalfInteger from_twice(int twice);
  // Throws DomainError unless 2*value is an odd integer.
  static HalfInteger from_double(double value);

  int twice() const noexcept { return twice_; }
  double value() const noexcept { return 0.5 * twice_; }

  friend bool operator==(HalfInteger, HalfInteger) = default;

 private:
  explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_;
};

// Relativistic angular quantum number k_d = tau (j + (d - 2)/2).
double kappa(int d, HalfInteger j, int tau);
double kappa(int d, double j, int tau);

class AngularSector {
 public:
  AngularSector(int d, HalfInteger j, int tau);

  int dimension() const noexcept { return d_; }
  HalfInteger j() const noexcept { return j_; }
  int tau() const noexcept { return tau_; }
  double kappa() const noexcept { return kappa_; }

  friend bool operator==(const AngularSector& a, const AngularSector& b) {
    return a.d_ == b.d_ && a.j_ == b.j_ && a.tau_ == b.tau_;
  }

 private:
  int d_;
  HalfInteger j_;
  int tau_;
  double kappa_;
};

// ---------------------------------------------------------------------------
// Potential catalog. All families are attractive (V <= 0) and vanish at
// infinity for nonnegative strengths.

namespace family {

struct Exponential {  // -beta exp(-b r)
  double beta, b;
};
struct LaserDressed {  // -alpha / sqrt(r^2 + a^2)
  double alpha, a;
};
struct WoodsSaxon {  // -v / (1 + exp((r - R)/a))
  double v, R, a;
};
struct Coulomb {  // -v / r
  double v;
};
struct Yukawa {  // -v exp(-lambda r) / r
  double v, lambda;
};
struct Hulthen {  // -v / (exp(lambda r) - 1)
  double v, lambda;
};
struct SechSquared {  // -beta sech^2(b r)
  double beta, b;
};
struct PowerSingular {  // -v / r^q, 0 < q < 1
  double v, q;
};
// -alpha/(u r^3 + a) * (1 + v sin(kappa r^3 + s)/(kappa r^3 + s))
struct OscCubic {
  double alpha, a, u, v, kappa, s;
};
struct RationalCubic {  // -beta / (w r^3 + b)
  double beta, b, w;
};

// Samples (r_i, V_i) with r_0 >= 0 strictly increasing, interpolated by a
// monotone (Fritsch-Carlson) cubic. Constant extension outside the table.
class Tabulated {
 public:
  Tabulated(std::vector<double> r, std::vector<double> V);

  double operator()(double r) const;
  const std::vector<double>& r() const noexcept { return data_->r; }
  const std::vector<double>& V() const noexcept { return data_->V; }

 private:
  struct Data {
    std::vector<double> r, V, slope;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace family

class PotentialSpec {
 public:
  using Family = std::variant<family::Exponential, family::LaserDressed, family::WoodsSaxon,
                              family::Coulomb, family::Yukawa, family::Hulthen,
                              family::SechSquared, family::PowerSingular, family::OscCubic,
                              family::RationalCubic, family::Tabulated>;

  // Validates parameters: strengths >= 0, shape parameters > 0, q in (0, 1).
  template <class F>
    requires std::is_constructible_v<Family, F>
  PotentialSpec(F f)  // NOLINT(google-explicit-constructor)
      : family_(std::move(f)) {
    validate();
  }

  const Family& family() const noexcept { return family_; }
  std::string_view name() const noexcept;
  // Named scalar parameters in catalog order (empty for tabulated).
  std::vector<std::pair<std::string, double>> parameters() const;

  bool singular_at_origin() const noexcept;
  // OscCubic is registered as non-monotone regardless of its parameters.
  bool registered_monotone() const noexcept;
  // Length over which the potential varies; sets r_min and grid scales.
  double characteristic_length() const noexcept;

  double operator()(double r) const;

 private:
  void validate() const;
  Family family_;
};

// V(r); throws DomainError for r < 0 or r = 0 on a singular family.
double evaluate(const PotentialSpec& p, double r);

std::span<const std::string_view> catalog_names();
std::span<const std::string_view> parameter_names(std::string_view family_name);
// Builds a scalar-parameter family by catalog name. Unknown names or missing
// parameters throw std::invalid_argument.
PotentialSpec make_potential(std::string_view name, const std::map<std::string, double>& params);

// ---------------------------------------------------------------------------
// Regularity classes at the origin.

namespace potential_class {
struct Bounded {
  double V0;  // lim_{r->0+} V
};
struct CoulombLike {
  double f0;  // lim_{r->0+} (-r V)
};
struct SubCoulomb {
  double v, q;
};
struct Unsupported {
  std::string reason;
};
}  // namespace potential_class

using PotentialClass = std::variant<potential_class::Bounded, potential_class::CoulombLike,
                                    potential_class::SubCoulomb, potential_class::Unsupported>;

std::string_view class_name(const PotentialClass& c);

struct ClassifyOptions {
  // Tabulated data must have decayed by this radius (0: last sample).
  double horizon = 0.0;
  double vanishing_tolerance = 1e-6;
};

PotentialClass classify(const PotentialSpec& p, const ClassifyOptions& opts = {});

// ---------------------------------------------------------------------------

struct OneDim {
  friend bool operator==(OneDim, OneDim) = default;
};

using Geometry = std::variant<OneDim, AngularSector>;

inline bool is_one_dim(const Geometry& g) { return std::holds_alternative<OneDim>(g); }
// 0 for the line; k_d otherwise.
double geometry_kappa(const Geometry& g);

struct Problem {
  Problem(double mass, Geometry geometry, PotentialSpec potential);

  double mass;
  Geometry geometry;
  PotentialSpec potential;
};

enum class Base { A, B };

struct ComparisonCase {
  // Throws std::invalid_argument when masses or geometries differ.
  ComparisonCase(Problem a, Problem b, Base base = Base::A);

  Problem a;
  Problem b;
  Base base;

  const Problem& base_problem() const { return base == Base::A ? a : b; }
  ComparisonCase swapped() const;
};

enum class Theorem { T1 = 1, T2, T3, T4, T5, T6, T7 };

inline int theorem_number(Theorem t) { return static_cast<int>(t); }
Theorem theorem_from_number(int n);
// Theorems 1 and 2 are posed on the line; 3-7 in d > 1.
bool theorem_for_geometry(Theorem t, const Geometry& g);

struct Condition {
  std::string name;
  bool holds;
  std::string detail;
};

struct ApplicabilityReport {
  Theorem theorem;
  std::vector<Condition> conditions;
  bool applicable = false;

  std::vector<std::string> failed() const;
};

struct PreconditionOptions {
  int monotone_samples = 256;
  double sample_r_lo = 1e-6;
  // 0: 50 x the larger characteristic length.
  double sample_r_hi = 0.0;
};

ApplicabilityReport check_preconditions(const ComparisonCase& c, Theorem t,
                                        const PreconditionOptions& opts = {});

}  // namespace dirac
