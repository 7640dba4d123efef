#pragma once

#include "agm/verify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace agm {

/// Identifiers accepted by evaluate_object. Bracketed entries are patterns:
/// each p is 1 or 2.
inline const std::vector<std::string>& object_ids() {
  static const std::vector<std::string> ids{
      "L_sym",    "L_anti",   "R",        "Ricci",      "K",         "Kij",
      "T_assoc",  "W_assoc",  "T_red",    "W_rs",       "W_der",     "T_tor",
      "theta[ppp]", "Theta_jmn", "Theta_jnm", "Theta_mnj", "W_fam[ppp,ppp]",
      "pi3_T",    "pi3_Wc",   "pi3_Wd",   "pi3_X",      "pi3_Y",     "pi3_Z",
      "pi3_Wdd",  "pi3_Wddd", "pi3_s",    "pi3_calW[ppp,ppp]", "pi3_W[ppp,ppp]"};
  return ids;
}

namespace detail {

/// Everything an invariant may consume, for one side of the mapping.
struct Side {
  Connection L;
  TensorGrid omega, tau;
  std::optional<Pi3MappingData> m;
};

inline Side side_of(const Scenario& s, bool barred) {
  if (s.is_pi3()) {
    const Pi3Instance p = instantiate_pi3(s);
    Side out{barred ? p.L_bar : p.L, {}, TensorGrid::of_valence(s.dimension, 1, 2), barred ? p.m_bar : p.m};
    out.omega = omega_pi3(out.L, *out.m).omega;
    return out;
  }
  const auto& d = s.general();
  if (barred) return {image_connection(s), d.omega_bar, d.tau_bar, std::nullopt};
  return {s.L, d.omega, d.tau, std::nullopt};
}

inline std::optional<ThetaSelector> parse_selector(const std::string& t) {
  if (t.size() != 3) return std::nullopt;
  ThetaSelector sel;
  for (std::size_t k = 0; k < 3; ++k) {
    if (t[k] != '1' && t[k] != '2') return std::nullopt;
    sel.p[k] = t[k] - '0';
  }
  return sel;
}

/// Splits "name[abc]" or "name[abc,def]"; returns false when the shape is wrong.
inline bool split_bracket(const std::string& id, std::string& head, std::vector<ThetaSelector>& sels) {
  const auto open = id.find('[');
  if (open == std::string::npos) {
    head = id;
    return true;
  }
  if (id.back() != ']') return false;
  head = id.substr(0, open);
  std::string body = id.substr(open + 1, id.size() - open - 2);
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    auto sel = parse_selector(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!sel) return false;
    sels.push_back(*sel);
    if (comma == std::string::npos) return true;
    start = comma + 1;
  }
}

[[noreturn]] inline void unknown_object(const std::string& id) {
  std::string msg = "unknown object '" + id + "'; valid ids:";
  for (const auto& k : object_ids()) msg += " " + k;
  throw validation_error(msg);
}

}  // namespace detail

/// Evaluates a named object on the source side or, with `barred`, on the image side.
inline TensorGrid evaluate_object(const Scenario& s, const std::string& id, bool barred) {
  std::string head;
  std::vector<ThetaSelector> sels;
  if (!detail::split_bracket(id, head, sels)) detail::unknown_object(id);
  const auto arity = [&](std::size_t k) {
    if (sels.size() != k) detail::unknown_object(id);
  };
  const auto need_pi3 = [&]() -> const Pi3MappingData& {
    if (!s.is_pi3()) throw validation_error("object '" + id + "' requires a pi3 scenario");
    return s.pi3();
  };
  const auto need_kind1 = [&] {
    if (need_pi3().kind != 1) throw validation_error("object '" + id + "' is defined for subtype 1 only");
  };
  const bool bracketed = head == "theta" || head == "W_fam" || head == "pi3_calW" || head == "pi3_W";
  arity(head == "theta" ? 1 : bracketed ? 2 : 0);
  if (head.rfind("pi3_", 0) == 0 || head == "T_red" || head == "W_rs" || head == "W_der") need_pi3();
  if (head == "pi3_X" || head == "pi3_Y" || head == "pi3_Z" || head == "pi3_Wdd" || head == "pi3_Wddd" ||
      head == "pi3_s")
    need_kind1();

  const detail::Side sd = detail::side_of(s, barred);
  const Connection& l = sd.L;
  if (head == "L_sym") return l.sym();
  if (head == "L_anti") return l.anti();
  if (head == "R") return curvature(l);
  if (head == "Ricci") return ricci(l);
  if (head == "K") return curvature_family(l, s.fc);
  if (head == "Kij") return ricci_family(l, s.fc);
  if (head == "T_assoc") return thomas_assoc(l, sd.omega);
  if (head == "W_assoc") return weyl_assoc(l, sd.omega);
  if (head == "T_tor") return thomas_torsion(l, sd.tau);
  if (head == "theta") return theta(l, sels[0], sd.omega, sd.tau);
  if (head == "Theta_jmn") return big_theta(l, sd.tau, ThetaOrder::jmn);
  if (head == "Theta_jnm") return big_theta(l, sd.tau, ThetaOrder::jnm);
  if (head == "Theta_mnj") return big_theta(l, sd.tau, ThetaOrder::mnj);
  if (head == "W_fam") return weyl_family(l, s.fc, sels[0], sels[1], sd.omega, sd.tau);
  if (sd.m) {
    const Pi3MappingData& m = *sd.m;
    if (head == "T_red" || head == "W_rs" || head == "W_der") {
      const Pi3Omega om = omega_pi3(l, m);
      if (head == "T_red") return thomas_reduced(l, om.sigma_t);
      if (head == "W_rs") return weyl_rho_sigma(l, om.rho, om.sigma_t);
      return weyl_derived(l, om.sigma_t);
    }
    if (head == "pi3_T") return pi3_thomas(l, m);
    if (head == "pi3_Wc") return pi3_weyl_assoc(l, m);
    if (head == "pi3_Wd") return pi3_weyl_derived(l, m);
    if (head == "pi3_X") return pi3_xyz(l, m).x;
    if (head == "pi3_Y") return pi3_xyz(l, m).y;
    if (head == "pi3_Z") return pi3_xyz(l, m).z;
    if (head == "pi3_Wdd") return pi3_weyl_dd(l, m);
    if (head == "pi3_Wddd") return pi3_weyl_ddd(l, m);
    if (head == "pi3_s") return pi3_scalar(l, m);
    if (head == "pi3_calW") return pi3_family(l, m, s.fc, sels[0], sels[1], FamilyBase::assoc);
    if (head == "pi3_W") return pi3_family(l, m, s.fc, sels[0], sels[1], FamilyBase::derived);
  }
  detail::unknown_object(id);
}

}  // namespace agm
