#include <vgreeks/weights.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace vgreeks;

namespace {

AlphaRFSV rough_bergomi() { return AlphaRFSV{0.62, 0.21, 1.0, -0.05, {0.14, 1e-6}}; }

std::vector<ModelSpec> all_stochastic_models() {
  return {AlphaRFSV{0.3, 0.8, 1.0, -0.7, {0.1, 1e-6}},
          AlphaRFSV{0.3, 0.5, 0.0, 0.6, {0.4, 0.0}},
          MixedAlphaRFSV{0.3, 0.6, 0.4, 0.5, -0.6, {0.1, 1e-6}, {0.7, 1e-6}},
          RoughSteinStein{0.25, 1.2, 0.2, 0.3, -0.5, {0.2, 1e-6}},
          AlphaSV{0.04, 0.9, 1.0, -0.7},
          SteinStein{0.25, 1.2, 0.2, 0.3, 0.5}};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Increments with every dW_i moved by h dt: the direction along which the
// weight sums are directional derivatives.
DriverIncrements shifted(const DriverIncrements& inc, double h, double dt) {
  auto dW = inc.dW;
  for (double& x : dW) x += h * dt;
  return make_increments(dW, inc.dWt, inc.rho);
}

}  // namespace

TEST(Weights, AlphaRFSVClosedFormsMatchGenericQuadrature) {
  const TimeGrid g(1.0, 48);
  for (const AlphaRFSV& m : {rough_bergomi(), AlphaRFSV{0.3, 0.8, 1.0, -0.7, {0.1, 1e-6}},
                             AlphaRFSV{0.5, 0.4, 0.3, 0.9, {0.45, 0.0}}}) {
    for (auto scheme : {ConvolutionScheme::left_point, ConvolutionScheme::cell_integrated}) {
      const ModelEngine e(m, {100.0, 0.02}, g, scheme);
      for (std::uint64_t p = 0; p < 3; ++p) {
        const auto b = e.simulate(8, p);
        const auto DV = e.malliavin_dV(b);
        const double gi = compute_intG_generic(e, b, DV), fi = compute_intG_alpharfsv(e, b);
        const double gj = compute_iintDsG_generic(e, b, DV), fj = compute_iintDsG_alpharfsv(e, b);
        const auto d = compute_directional(e, b, e.directional(b));
        const auto w = weight_components(e, b);
        EXPECT_LT(rel(fi, gi), 1e-10);
        EXPECT_LT(rel(fj, gj), 1e-8);
        EXPECT_LT(rel(d.intG, gi), 1e-10);
        EXPECT_LT(rel(d.iintDsG, gj), 1e-8);
        EXPECT_LT(rel(w.iiintDDsG, d.iiintDDsG), 1e-10);
        EXPECT_EQ(w.WT, d.WT);
      }
    }
  }
}

TEST(Weights, GenericAndDirectionalRoutesAgreeForEveryModel) {
  const TimeGrid g(1.0, 40);
  for (const auto& model : all_stochastic_models()) {
    const ModelEngine e(model, {100.0, 0.0}, g);
    const auto b = e.simulate(12, 1);
    const auto DV = e.malliavin_dV(b);
    const auto d = compute_directional(e, b, e.directional(b));
    EXPECT_LT(rel(d.intG, compute_intG_generic(e, b, DV)), 1e-10) << model_name(model);
    EXPECT_LT(rel(d.iintDsG, compute_iintDsG_generic(e, b, DV)), 1e-8) << model_name(model);
  }
}

TEST(Weights, ComponentsAreShiftDerivatives) {
  // intG = D log S_T, iintDsG = D intG, iiintDDsG = D iintDsG, with D the
  // derivative along the shift dW_i -> dW_i + h dt.
  const TimeGrid g(1.0, 32);
  const double h = 1e-4;
  for (const auto& model : all_stochastic_models()) {
    const ModelEngine e(model, {100.0, 0.03}, g);
    const auto inc = e.increments(3, 0);
    const auto b = e.simulate(inc), up = e.simulate(shifted(inc, h, g.dt())),
               dn = e.simulate(shifted(inc, -h, g.dt()));
    const auto w = weight_components(e, b), wu = weight_components(e, up), wd = weight_components(e, dn);
    const double dlogS = (std::log(up.S.back()) - std::log(dn.S.back())) / (2 * h);
    EXPECT_NEAR(dlogS, w.intG, 1e-7 * std::max(1.0, std::abs(w.intG))) << model_name(model);
    EXPECT_NEAR((wu.intG - wd.intG) / (2 * h), w.iintDsG, 1e-7 * std::max(1.0, std::abs(w.iintDsG)))
        << model_name(model);
    EXPECT_NEAR((wu.iintDsG - wd.iintDsG) / (2 * h), w.iiintDDsG, 1e-7 * std::max(1.0, std::abs(w.iiintDDsG)))
        << model_name(model);
  }
}

TEST(Weights, UncorrelatedDriversGiveExactReductions) {
  const TimeGrid g(1.0, 32);
  for (const ModelSpec& model :
       {ModelSpec(AlphaRFSV{0.3, 0.8, 1.0, 0.0, {0.1, 1e-6}}),
        ModelSpec(MixedAlphaRFSV{0.3, 0.6, 0.4, 0.5, 0.0, {0.1, 1e-6}, {0.7, 1e-6}}),
        ModelSpec(RoughSteinStein{0.25, 1.2, 0.2, 0.3, 0.0, {0.2, 1e-6}}), ModelSpec(AlphaSV{0.04, 0.9, 1.0, 0.0}),
        ModelSpec(SteinStein{0.25, 1.2, 0.2, 0.3, 0.0})}) {
    const ModelEngine e(model, {}, g);
    const auto b = e.simulate(5, 5);
    const auto DV = e.malliavin_dV(b);
    const double s0 = sigma_derivs(model, b.V[0]).s0;
    double vol = 0.0;
    for (std::size_t i = 0; i < 32; ++i) vol += sigma_derivs(model, b.V[i]).s0 - s0;
    EXPECT_EQ(compute_intG_generic(e, b, DV), s0 * g.horizon() + vol * g.dt()) << model_name(model);
    EXPECT_EQ(compute_iintDsG_generic(e, b, DV), 0.0);
    const auto w = weight_components(e, b);
    EXPECT_EQ(w.iintDsG, 0.0);
    EXPECT_EQ(w.iiintDDsG, 0.0);
    const double exact = s0 * g.horizon() + vol * g.dt();
    EXPECT_NEAR(w.intG, exact, 1e-15 * exact);
  }
  const AlphaRFSV m{0.3, 0.8, 1.0, 0.0, {0.1, 1e-6}};
  const ModelEngine e(m, {}, g);
  const auto b = e.simulate(5, 5);
  double vol = 0.0;
  for (std::size_t i = 0; i < 32; ++i) vol += b.V[i] - b.V[0];
  EXPECT_EQ(compute_intG_alpharfsv(e, b), b.V[0] * g.horizon() + vol * g.dt());
  EXPECT_EQ(compute_iintDsG_alpharfsv(e, b), 0.0);
}

TEST(Weights, ConstantVolatilityReductions) {
  const TimeGrid g(2.0, 64);
  const AlphaRFSV m{0.2, 0.0, 1.0, -0.5, {0.14, 1e-6}};
  const ModelEngine e(m, {}, g);
  const auto b = e.simulate(7, 0);
  const auto w = weight_components(e, b);
  EXPECT_EQ(w.intG, 0.2 * 2.0);
  EXPECT_EQ(compute_intG_alpharfsv(e, b), 0.2 * 2.0);
  EXPECT_EQ(compute_intG_generic(e, b, e.malliavin_dV(b)), 0.2 * 2.0);
  EXPECT_EQ(w.iintDsG, 0.0);
  EXPECT_NEAR(assemble_delta_weight(w), w.WT / (0.2 * 2.0), 1e-14);

  const auto num = assemble_vega_numerator(e, b, e.directional(b).d1, SensitivityParam::V0);
  EXPECT_NEAR(num.N, -0.2 * 2.0 + w.WT, 1e-14);
  EXPECT_NEAR(num.intDN, 2.0, 1e-14);
  const double vega = assemble_theta_weight(num, w);
  EXPECT_NEAR(vega, ((w.WT - 0.4) * w.WT - 2.0) / 0.4, 1e-12);

  // Classical Black-Scholes Gamma weight (W^2/(sigma T) - W - 1/sigma) / (sigma T).
  const double WT = w.WT;
  EXPECT_NEAR(assemble_gamma_weight(w, 2.0), (WT * WT / 0.4 - WT - 1 / 0.2) / 0.4, 1e-12);

  const ModelEngine eb(BlackScholes{0.2}, {}, g);
  const auto bb = eb.simulate(7, 0);
  const auto wb = weight_components(eb, bb);
  EXPECT_NEAR(wb.intG, 0.4, 1e-15);
  EXPECT_EQ(wb.WT, w.WT);
  const auto nb = assemble_vega_numerator(eb, bb, eb.directional(bb).d1, SensitivityParam::V0);
  EXPECT_NEAR(nb.N, num.N, 1e-14);
  EXPECT_NEAR(nb.intDN, num.intDN, 1e-14);
}

TEST(Weights, SingleStepUnroll) {
  const TimeGrid g(0.5, 1);
  const AlphaRFSV m{0.3, 0.4, 1.0, -0.6, {0.2, 1e-6}};
  const ModelEngine e(m, {}, g);
  const auto b = e.simulate(make_increments({0.7}, {-0.2}, m.rho));
  // The discrete kappa at t_0 is an empty sum, so only the time part survives.
  EXPECT_DOUBLE_EQ(compute_intG_alpharfsv(e, b), 0.5 * 0.3);
  EXPECT_EQ(compute_iintDsG_alpharfsv(e, b), 0.0);
}

TEST(Weights, SteinSteinDoubleIntegralMatchesClosedForm) {
  const double rho = 0.5, nu = 0.3, kappa = 1.2, T = 1.0;
  const SteinStein m{0.25, kappa, 0.2, nu, rho};
  const double c = rho * nu;
  const double ekT = std::exp(-kappa * T);
  const double square = 2.0 * (T / kappa - (1.0 - ekT) / (kappa * kappa));
  const double inner = (T - 2.0 * (1.0 - ekT) / kappa + (1.0 - std::exp(-2.0 * kappa * T)) / (2.0 * kappa)) /
                       (kappa * kappa);
  const double exact = c * square - c * c * inner;
  // The left-point scheme is first order in dt; extrapolate two grids.
  auto discrete = [&](std::size_t n) {
    const TimeGrid g(T, n);
    const ModelEngine e(m, {}, g);
    const auto b = e.simulate(0, 0);
    const double gen = compute_iintDsG_generic(e, b, e.malliavin_dV(b));
    EXPECT_NEAR(weight_components(e, b).iintDsG / gen, 1.0, 1e-10);
    return gen;
  };
  const double i256 = discrete(256), i512 = discrete(512);
  EXPECT_NEAR(i256 / exact, 1.0, 2e-3);
  EXPECT_NEAR((exact - i256) / (exact - i512), 2.0, 0.05);
  EXPECT_NEAR((2.0 * i512 - i256) / exact, 1.0, 1e-5);

  const TimeGrid g(T, 64);
  const RoughSteinStein flat{0.25, kappa, 0.2, 0.0, rho, {0.3, 1e-6}};
  const ModelEngine ef(flat, {}, g);
  const auto bf = ef.simulate(0, 0);
  EXPECT_EQ(compute_iintDsG_generic(ef, bf, ef.malliavin_dV(bf)), 0.0);
}

TEST(Weights, AssemblyArithmetic) {
  EXPECT_DOUBLE_EQ(assemble_delta_weight({1.0, 0.0, 0.3, 0.0}), 0.3);
  EXPECT_DOUBLE_EQ(assemble_delta_weight({2.0, 4.0, 0.0, 0.0}), 1.0);
  EXPECT_EQ(assemble_theta_weight({0.0, 0.0}, {1.3, 0.4, 0.2, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(assemble_theta_weight({0.7, 0.2}, {1.0, 0.0, 0.5, 0.0}), 0.7 * 0.5 - 0.2);
  EXPECT_THROW((void)assemble_delta_weight({1e-13, 0.0, 1.0, 0.0}), DegenerateWeightError);
  EXPECT_THROW((void)assemble_theta_weight({1.0, 1.0}, {0.0, 0.0, 1.0, 0.0}), DegenerateWeightError);
  EXPECT_THROW((void)assemble_gamma_weight({std::nan(""), 0.0, 1.0, 0.0}, 1.0), DegenerateWeightError);
  EXPECT_TRUE(is_degenerate({-5e-13, 0.0, 0.0, 0.0}));
  EXPECT_FALSE(is_degenerate({-5e-12, 0.0, 0.0, 0.0}));
}

TEST(Weights, VegaNumeratorReductions) {
  const TimeGrid g(1.0, 32);
  AlphaRFSV m = rough_bergomi();
  m.rho = 0.0;
  const ModelEngine e(m, {}, g, ConvolutionScheme::left_point, true);
  const auto b = e.simulate(6, 0);
  const auto a = e.dtheta_vol(b, SensitivityParam::V0);
  double sum_a = 0.0;
  for (std::size_t i = 0; i < 32; ++i) sum_a += a[i];
  EXPECT_NEAR(assemble_vega_numerator(e, b, e.malliavin_dV(b), SensitivityParam::V0).intDN, sum_a * g.dt(), 1e-15);

  AlphaRFSV flat = rough_bergomi();
  flat.xi = 0.0;
  const ModelEngine ef(flat, {}, g, ConvolutionScheme::left_point, true);
  const auto bf = ef.simulate(6, 0);
  const auto nH = assemble_vega_numerator(ef, bf, ef.malliavin_dV(bf), SensitivityParam::H);
  EXPECT_EQ(nH.N, 0.0);
  EXPECT_EQ(nH.intDN, 0.0);
}

TEST(Weights, VegaNumeratorDerivativeIsShiftDerivative) {
  const TimeGrid g(1.0, 32);
  const double h = 1e-4;
  for (const AlphaRFSV& m : {rough_bergomi(), AlphaRFSV{0.3, 0.8, 0.6, -0.7, {0.1, 1e-6}}}) {
    const ModelEngine e(m, {100.0, 0.01}, g, ConvolutionScheme::left_point, true);
    const auto inc = e.increments(21, 4);
    const auto b = e.simulate(inc), up = e.simulate(shifted(inc, h, g.dt())),
               dn = e.simulate(shifted(inc, -h, g.dt()));
    for (auto which : {SensitivityParam::V0, SensitivityParam::H}) {
      const auto n0 = assemble_vega_numerator(e, b, e.malliavin_dV(b), which);
      const auto n1 = assemble_vega_numerator(e, b, e.directional(b).d1, which);
      EXPECT_NEAR(n0.N, n1.N, 1e-13);
      EXPECT_NEAR(n0.intDN, n1.intDN, 1e-12);
      const double nu = assemble_vega_numerator(e, up, e.directional(up).d1, which).N;
      const double nd = assemble_vega_numerator(e, dn, e.directional(dn).d1, which).N;
      EXPECT_NEAR((nu - nd) / (2 * h), n0.intDN, 1e-7 * std::max(1.0, std::abs(n0.intDN)));
    }
  }
}

TEST(Weights, NumeratorIsParameterDerivativeOfLogPrice) {
  // N = d log S_T / d theta at fixed increments.
  const TimeGrid g(1.0, 32);
  const AlphaRFSV m = rough_bergomi();
  const ModelEngine e(m, {100.0, 0.0}, g, ConvolutionScheme::left_point, true);
  const auto inc = e.increments(2, 2);
  const auto b = e.simulate(inc);
  const double h = 1e-5;
  auto up = m, dn = m;
  up.V0 += h;
  dn.V0 -= h;
  const double fdV0 = (std::log(ModelEngine(up, {100.0, 0.0}, g).simulate(inc).S.back()) -
                       std::log(ModelEngine(dn, {100.0, 0.0}, g).simulate(inc).S.back())) /
                      (2 * h);
  EXPECT_NEAR(assemble_vega_numerator(e, b, e.directional(b).d1, SensitivityParam::V0).N, fdV0, 1e-7);
  up = m;
  dn = m;
  up.kernel.H += h;
  dn.kernel.H -= h;
  const double fdH = (std::log(ModelEngine(up, {100.0, 0.0}, g).simulate(inc).S.back()) -
                      std::log(ModelEngine(dn, {100.0, 0.0}, g).simulate(inc).S.back())) /
                     (2 * h);
  EXPECT_NEAR(assemble_vega_numerator(e, b, e.directional(b).d1, SensitivityParam::H).N, fdH, 1e-7);
}

TEST(Weights, WrongModelForClosedForm) {
  const TimeGrid g(1.0, 8);
  const ModelEngine e(SteinStein{}, {}, g);
  const auto b = e.simulate(0, 0);
  EXPECT_THROW((void)compute_intG_alpharfsv(e, b), UnsupportedError);
  EXPECT_THROW((void)compute_iintDsG_alpharfsv(e, b), UnsupportedError);
}
