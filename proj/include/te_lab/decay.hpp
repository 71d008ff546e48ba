// Predicted Lp-Lq decay exponents: per special direction and global.
#pragma once

#include <string>
#include <vector>

#include "te_lab/classify.hpp"
#include "te_lab/fresnel.hpp"

namespace te {

// Exponent e in (1+t)^(-e (1/p - 1/q)).
double predict_direction(const DirectionClass& cls, int gamma_bar);

struct DirectionPrediction {
  DirectionClass cls;
  int gamma_bar = 0;
  double exponent = 0.0;
  // Degenerate directions are listed but take no part in the minimum.
  bool excluded = false;
};

struct DecayPrediction {
  std::vector<DirectionPrediction> per_direction;
  double parabolic_small_freq = 1.0;
  std::string parabolic_large_freq = "exp";
  // Set when a coupling vanishes on the whole circle; the branch then decays
  // like a free wave with exponent 1/gamma_bar_max.
  bool decoupled = false;
  int decoupled_branch = 0;
  int decoupled_gamma_bar = 0;
  double decoupled_exponent = 0.0;
  double global_exponent = 1.0;
  // Data must lie in H^{r} with r > regularity_factor * (1/p - 1/q).
  double regularity_factor = 2.0;
};

DecayPrediction predict_global(const Medium& m, int n_scan = 1024);

}  // namespace te
