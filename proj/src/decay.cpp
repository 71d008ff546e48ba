#include "te_lab/decay.hpp"

#include <algorithm>

namespace te {

double predict_direction(const DirectionClass& cls, int gamma_bar) {
  if (cls.tag != DirectionTag::hyperbolic || !cls.vanishing_order)
    throw ValidationError("prediction needs a hyperbolic direction with a measured vanishing order");
  if (gamma_bar < 2) throw ValidationError("contact order must be >= 2");
  const VanishingOrder& v = *cls.vanishing_order;
  // Couplings vanishing identically near eta_bar leave a free wave branch.
  if (v.identically_vanishing) return 1.0 / gamma_bar;
  if (v.ell < 1) throw ValidationError("vanishing order not determined");
  return 1.0 / std::min(2 * v.ell, gamma_bar);
}

DecayPrediction predict_global(const Medium& m, int n_scan) {
  const SpecialDirections sd = find_special_directions(m, n_scan);
  if (sd.all_degenerate) throw ValidationError("medium is fully degenerate; no prediction");
  for (const auto& d : sd.directions)
    if (d.tag == DirectionTag::gamma_degenerate)
      throw ValidationError("(A4) violated at phi = " + std::to_string(d.phi) + " (branch " +
                            std::to_string(d.j0) + "); prediction refused");

  DecayPrediction out;
  out.global_exponent = out.parabolic_small_freq;
  FresnelProfile profiles[2] = {FresnelProfile(m, 1), FresnelProfile(m, 2)};
  for (const auto& d : sd.directions) {
    DirectionPrediction p;
    p.cls = d;
    if (d.tag != DirectionTag::hyperbolic) {
      p.excluded = true;
      out.per_direction.push_back(p);
      continue;
    }
    const ContactOrder c = contact_order(profiles[d.j0 - 1], d.phi);
    p.gamma_bar = c.gamma_bar;
    p.exponent = predict_direction(d, c.gamma_bar);
    out.global_exponent = std::min(out.global_exponent, p.exponent);
    out.per_direction.push_back(p);
  }
  if (sd.decoupled) {
    const FresnelProfile& prof = profiles[sd.decoupled_branch - 1];
    int gb = 2;
    for (double phi : flat_points(prof)) gb = std::max(gb, contact_order(prof, phi).gamma_bar);
    out.decoupled = true;
    out.decoupled_branch = sd.decoupled_branch;
    out.decoupled_gamma_bar = gb;
    out.decoupled_exponent = 1.0 / gb;
    out.global_exponent = std::min(out.global_exponent, out.decoupled_exponent);
  }
  return out;
}

}  // namespace te
