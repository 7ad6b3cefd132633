#include <vgreeks/weights.hpp>

#include <string>
#include <vector>

namespace vgreeks {

namespace {

const AlphaRFSV& require_alpharfsv(const ModelEngine& engine, const char* what) {
  const auto* m = std::get_if<AlphaRFSV>(&engine.model());
  if (m == nullptr) {
    throw UnsupportedError(std::string(what) + ": closed form requires alpha_rfsv, got " +
                           std::string(model_name(engine.model())));
  }
  return *m;
}

void check_bundle(const ModelEngine& engine, const PathBundle& b) {
  const std::size_t n = engine.grid().steps();
  if (b.V.size() != n + 1 || b.inc.dW.size() != n) throw std::invalid_argument("weights: bundle does not match grid");
}

void check_intG(double intG) {
  if (!(std::abs(intG) >= kDegenerateIntG)) {
    throw DegenerateWeightError("weights: |intG| below degeneracy threshold");
  }
}

// J3 = sum_j D_j(iintDsG) dt for AlphaRFSV:
//   3 (rho xi)^2 sum V k^2 dt + (rho xi)^3 (sum V k^3 dW - 4 sum V^2 k^3 dt)
double iiintDDsG_alpharfsv(const ModelEngine& engine, const AlphaRFSV& m, const PathBundle& b) {
  const auto kappa = engine.weights()->discrete_kappa();
  const double dt = engine.grid().dt();
  const double c = m.rho * m.xi;
  double quad = 0.0, stoch = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < engine.grid().steps(); ++i) {
    const double k2 = kappa[i] * kappa[i];
    quad += b.V[i] * k2;
    stoch += b.V[i] * k2 * kappa[i] * b.inc.dW[i];
    drift += b.V[i] * b.V[i] * k2 * kappa[i];
  }
  return 3.0 * c * c * quad * dt + c * c * c * (stoch - 4.0 * drift * dt);
}

}  // namespace

double compute_intG_generic(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV) {
  check_bundle(engine, b);
  const std::size_t n = engine.grid().steps();
  const double dt = engine.grid().dt();
  const double sigma0 = sigma_derivs(engine.model(), b.V[0]).s0;
  double time_part = 0.0, stoch = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SigmaDerivs sd = sigma_derivs(engine.model(), b.V[i]);
    const double A = DV.column_integral(i, dt);  // sum_{t<s} D_t V_s dt
    time_part += sd.s0 - sigma0;
    stoch += sd.s1 * A * b.inc.dW[i];
    drift += sd.s0 * sd.s1 * A;
  }
  return sigma0 * engine.grid().horizon() + time_part * dt + stoch - drift * dt;
}

double compute_intG_alpharfsv(const ModelEngine& engine, const PathBundle& b) {
  const AlphaRFSV& m = require_alpharfsv(engine, "compute_intG_alpharfsv");
  check_bundle(engine, b);
  const auto kappa = engine.weights()->discrete_kappa();
  const double dt = engine.grid().dt();
  double vol = 0.0, stoch = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < engine.grid().steps(); ++i) {
    vol += b.V[i] - b.V[0];
    stoch += b.V[i] * kappa[i] * b.inc.dW[i];
    drift += b.V[i] * b.V[i] * kappa[i];
  }
  return b.V[0] * engine.grid().horizon() + vol * dt + m.rho * m.xi * (stoch - drift * dt);
}

double compute_iintDsG_alpharfsv(const ModelEngine& engine, const PathBundle& b) {
  const AlphaRFSV& m = require_alpharfsv(engine, "compute_iintDsG_alpharfsv");
  check_bundle(engine, b);
  const auto kappa = engine.weights()->discrete_kappa();
  const double dt = engine.grid().dt();
  const double c = m.rho * m.xi;
  double lin = 0.0, stoch = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < engine.grid().steps(); ++i) {
    const double k2 = kappa[i] * kappa[i];
    lin += b.V[i] * kappa[i];
    stoch += b.V[i] * k2 * b.inc.dW[i];
    drift += b.V[i] * b.V[i] * k2;
  }
  return 2.0 * c * lin * dt + c * c * (stoch - 2.0 * drift * dt);
}

double compute_iintDsG_generic(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV,
                               const SecondDerivativeProvider& ddV) {
  check_bundle(engine, b);
  const std::size_t n = engine.grid().steps();
  const double dt = engine.grid().dt();
  const auto& dW = b.inc.dW;

  std::vector<SigmaDerivs> sd(n);
  for (std::size_t i = 0; i < n; ++i) sd[i] = sigma_derivs(engine.model(), b.V[i]);

  // D_s G(t,T) is symmetric in (s,t); visit s <= t and double the off-diagonal.
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s; t < n; ++t) {
      double val = (s < t) ? sd[t].s1 * DV.at(s, t) : 0.0;
      const GridPath dd = ddV(s, t);
      for (std::size_t u = t + 1; u < n; ++u) {
        const double prod = DV.at(s, u) * DV.at(t, u);
        val += (sd[u].s2 * prod + sd[u].s1 * dd[u]) * dW[u];
        val -= ((sd[u].s1 * sd[u].s1 + sd[u].s0 * sd[u].s2) * prod + sd[u].s0 * sd[u].s1 * dd[u]) * dt;
      }
      total += (s < t ? 2.0 : 1.0) * val;
    }
  }
  return total * dt * dt;
}

double compute_iintDsG_generic(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV) {
  return compute_iintDsG_generic(engine, b, DV,
                                 [&](std::size_t s, std::size_t t) { return engine.malliavin_ddV(b, s, t); });
}

WeightComponents compute_directional(const ModelEngine& engine, const PathBundle& b, const DirectionalDerivatives& d) {
  check_bundle(engine, b);
  const std::size_t n = engine.grid().steps();
  const double dt = engine.grid().dt();
  const auto& dW = b.inc.dW;
  // Directional derivatives of sigma(V_i) by the chain rule, then of
  // log S_T = sum (r - sigma^2/2) dt + sum sigma dW, where the shift moves each dW_i by dt.
  double I_dt = 0.0, I_dW = 0.0;
  double J_dt = 0.0, J_dW = 0.0;
  double K_dt = 0.0, K_dW = 0.0;
  double WT = 0.0;
  const double sigma0 = sigma_derivs(engine.model(), b.V[0]).s0;
  for (std::size_t i = 0; i < n; ++i) {
    const SigmaDerivs sd = sigma_derivs(engine.model(), b.V[i]);
    const double a1 = d.d1[i], a2 = d.d2[i], a3 = d.d3[i];
    const double s1 = sd.s1 * a1;
    const double s2 = sd.s2 * a1 * a1 + sd.s1 * a2;
    const double s3 = sd.s3 * a1 * a1 * a1 + 3.0 * sd.s2 * a1 * a2 + sd.s1 * a3;
    I_dt += (sd.s0 - sigma0) - sd.s0 * s1;
    I_dW += s1 * dW[i];
    J_dt += 2.0 * s1 - s1 * s1 - sd.s0 * s2;
    J_dW += s2 * dW[i];
    K_dt += 3.0 * s2 - 3.0 * s1 * s2 - sd.s0 * s3;
    K_dW += s3 * dW[i];
    WT += dW[i];
  }
  WeightComponents w;
  w.intG = sigma0 * engine.grid().horizon() + I_dt * dt + I_dW;
  w.iintDsG = J_dt * dt + J_dW;
  w.iiintDDsG = K_dt * dt + K_dW;
  w.WT = WT;
  return w;
}

WeightComponents weight_components(const ModelEngine& engine, const PathBundle& b) {
  if (const auto* m = std::get_if<AlphaRFSV>(&engine.model())) {
    WeightComponents w;
    w.intG = compute_intG_alpharfsv(engine, b);
    w.iintDsG = compute_iintDsG_alpharfsv(engine, b);
    w.iiintDDsG = iiintDDsG_alpharfsv(engine, *m, b);
    w.WT = b.inc.terminal_W();
    return w;
  }
  return compute_directional(engine, b, engine.directional(b));
}

double assemble_delta_weight(const WeightComponents& w) {
  check_intG(w.intG);
  return w.WT / w.intG + w.iintDsG / (w.intG * w.intG);
}

ThetaNumerator assemble_vega_numerator(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV,
                                       SensitivityParam which) {
  const std::size_t n = engine.grid().steps();
  GridPath dV(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) dV[i] = DV.column_integral(i, engine.grid().dt());
  return assemble_vega_numerator(engine, b, dV, which);
}

ThetaNumerator assemble_vega_numerator(const ModelEngine& engine, const PathBundle& b,
                                       std::span<const double> dV_directional, SensitivityParam which) {
  check_bundle(engine, b);
  const GridPath a = engine.dtheta_vol(b, which);  // d sigma(V)/d theta with sigma(x) = x
  const std::size_t n = engine.grid().steps();
  const double dt = engine.grid().dt();

  // sum_j D_j a_i dt; zero for Black-Scholes.
  GridPath Da(n + 1, 0.0);
  if (const auto* m = std::get_if<AlphaRFSV>(&engine.model())) {
    const auto kappa = engine.weights()->discrete_kappa();
    const double c = m->rho * m->xi;
    for (std::size_t i = 0; i <= n; ++i) Da[i] = c * a[i] * kappa[i];
    if (which == SensitivityParam::H) {
      const VolterraWeights* wH = engine.weights_dH();
      if (wH == nullptr) throw std::invalid_argument("assemble_vega_numerator: engine built without dH weights");
      const auto kappaH = wH->discrete_kappa();
      for (std::size_t i = 0; i <= n; ++i) Da[i] += c * b.V[i] * kappaH[i];
    }
  }

  ThetaNumerator out;
  double b_dt = 0.0, a_dW = 0.0, a_dt = 0.0, Da_dW = 0.0, Db_dt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double bi = -b.V[i] * a[i];
    const double Dbi = -(dV_directional[i] * a[i] + b.V[i] * Da[i]);
    b_dt += bi;
    a_dW += a[i] * b.inc.dW[i];
    a_dt += a[i];
    Da_dW += Da[i] * b.inc.dW[i];
    Db_dt += Dbi;
  }
  out.N = b_dt * dt + a_dW;
  out.intDN = a_dt * dt + Da_dW + Db_dt * dt;
  return out;
}

double assemble_theta_weight(const ThetaNumerator& num, const WeightComponents& w) {
  check_intG(w.intG);
  return (num.N * w.WT - num.intDN) / w.intG + num.N * w.iintDsG / (w.intG * w.intG);
}

double assemble_gamma_weight(const WeightComponents& w, double horizon) {
  check_intG(w.intG);
  const double I = w.intG, J = w.iintDsG, J3 = w.iiintDDsG, WT = w.WT;
  const double pi = WT / I + J / (I * I);
  const double Dpi = horizon / I - WT * J / (I * I) + J3 / (I * I) - 2.0 * J * J / (I * I * I);
  const double skorokhod = pi * WT / I - Dpi / I + pi * J / (I * I);
  return skorokhod - pi;
}

}  // namespace vgreeks
