#include "volthunt/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace volthunt {

std::vector<std::string> SystemParams::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(v_ref) || !positive(eps) || !positive(chi) ||
      !positive(d_inv) || !positive(d_l1) || !positive(d_l2) ||
      !positive(vbar_l) || !positive(t_s)) {
    throw std::invalid_argument(
        "all parameters except g must be strictly positive and finite");
  }
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("eta must lie strictly in (0, 1)");
  }
  if (!std::isfinite(g)) {
    throw std::invalid_argument("g must be finite");
  }

  std::vector<std::string> warnings;
  if (!(d_inv < d_l1)) warnings.push_back("expected d_inv < d_l1");
  if (!(d_l1 < d_l2)) warnings.push_back("expected d_l1 < d_l2");
  if (!(d_l2 < 2.0 * d_l1)) warnings.push_back("expected d_l2 < 2 d_l1");
  if (!(vbar_l < 2.0 * eps)) {
    warnings.push_back("vbar_l >= 2 eps: every tap overshoots the deadband");
  }
  return warnings;
}

std::string SystemParams::to_json() const {
  nlohmann::ordered_json j;
  j["v_ref"] = v_ref;
  j["eps"] = eps;
  j["chi"] = chi;
  j["eta"] = eta;
  j["d_inv"] = d_inv;
  j["d_l1"] = d_l1;
  j["d_l2"] = d_l2;
  j["vbar_l"] = vbar_l;
  j["g"] = g;
  j["t_s"] = t_s;
  return j.dump(2);
}

SystemParams SystemParams::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bad params JSON: ") + e.what());
  }
  auto need = [&j](const char* key) -> double {
    if (!j.contains(key) || !j[key].is_number()) {
      throw std::invalid_argument(std::string("params JSON missing numeric key '") +
                                  key + "'");
    }
    return j[key].get<double>();
  };
  SystemParams p;
  p.v_ref = need("v_ref");
  p.eps = need("eps");
  p.chi = need("chi");
  p.eta = need("eta");
  p.d_inv = need("d_inv");
  p.d_l1 = need("d_l1");
  p.d_l2 = need("d_l2");
  p.vbar_l = need("vbar_l");
  p.g = need("g");
  p.t_s = need("t_s");
  return p;
}

}  // namespace volthunt
