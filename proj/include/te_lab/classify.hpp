// Direction taxonomy: parabolic / hyperbolic / degenerate / gamma-degenerate,
// special-direction search and coupling vanishing orders.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "te_lab/media.hpp"
#include "te_lab/spectral.hpp"

namespace te {

enum class DirectionTag { parabolic, hyperbolic, degenerate, gamma_degenerate };
std::string to_string(DirectionTag t);

inline constexpr double kCouplingZeroTol = 1e-7;
inline constexpr double kDegenerateTol = 1e-9;
inline constexpr int kMaxDerivativeOrder = 8;

struct VanishingOrder {
  int ell = 0;  // 0 when not determined
  // All derivatives up to order 8 below threshold: the coupling vanishes
  // identically or to order > 8.
  bool identically_vanishing = false;
};

struct DirectionClass {
  DirectionTag tag = DirectionTag::parabolic;
  double phi = 0.0;
  Vector2d eta = Vector2d::UnitX();
  int j0 = 0;  // branch index for hyperbolic and gamma-degenerate tags
  std::optional<VanishingOrder> vanishing_order;
  bool a4_ok = true;
};

// Spectral samples of a_1, a_2 on the circle, reused across many queries.
struct CouplingProfiles {
  std::vector<PeriodicSeries> a;  // a[0] = a_1, a[1] = a_2
  const PeriodicSeries& operator()(int j) const { return a[j - 1]; }
};
CouplingProfiles coupling_profiles(const Medium& m, int n = 1024);

DirectionClass classify_direction(const Medium& m, const Vector2d& eta, const CouplingProfiles* profiles = nullptr);

struct SpecialDirections {
  std::vector<DirectionClass> directions;  // ascending in phi
  // Coupling a_j vanishes on a whole arc (isotropic-like media); its roots
  // are not listed.
  bool decoupled = false;
  int decoupled_branch = 0;
  bool all_degenerate = false;

  int count(DirectionTag t) const;
};
SpecialDirections find_special_directions(const Medium& m, int n_scan);

VanishingOrder vanishing_order(const CouplingProfiles& p, double phi_bar, int j0);
VanishingOrder vanishing_order(const Medium& m, const Vector2d& eta_bar, int j0);

bool check_A4(const Medium& m, const Vector2d& eta_bar, int j0);

}  // namespace te
