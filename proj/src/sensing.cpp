#include "odl1/sensing.hpp"

#include <cmath>
#include <numbers>

namespace odl1 {

SensingModel gaussian_sensing(Index m, Index n, SeededRng& rng) {
  if (m < 1 || m > n) throw BadShape("gaussian_sensing: need 1 <= m <= n");
  SensingModel model;
  model.phi = gaussian_matrix(m, n, 1.0 / std::sqrt(static_cast<double>(m)),
                              rng);
  model.kind = SensingKind::Gaussian;
  return model;
}

SensingModel partial_dft_signflip_sensing(Index m, Index n, SeededRng& rng) {
  if (m < 1 || m > n)
    throw BadShape("partial_dft_signflip_sensing: need 1 <= m <= n");
  const auto rows = rng.sample_without_replacement(n, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Mat phi(m, n);
  for (Index i = 0; i < m; ++i) {
    const double row = static_cast<double>(rows[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < n; ++j) {
      const double phase = -2.0 * std::numbers::pi * row *
                           static_cast<double>(j) / static_cast<double>(n);
      // 1/sqrt(n) unitary row scaled by sqrt(n/m).
      phi(i, j) = scale * Scalar(std::cos(phase), std::sin(phase));
    }
  }
  for (Index j = 0; j < n; ++j) phi.col(j) *= rng.sign();
  SensingModel model;
  model.phi = std::move(phi);
  model.kind = SensingKind::PartialDftSignFlipped;
  return model;
}

double gaussian_noise_bound(Index m, double sigma) {
  if (m < 2) throw BadShape("gaussian_noise_bound: need m >= 2");
  if (sigma < 0) throw BadParams("gaussian_noise_bound: sigma must be >= 0");
  const double md = static_cast<double>(m);
  return sigma * std::sqrt(md + 2.0 * std::sqrt(md * std::log(md)));
}

void set_noise_level(SensingModel& model, double sigma) {
  if (sigma < 0) throw BadParams("set_noise_level: sigma must be >= 0");
  model.sigma = sigma;
  model.epsilon = sigma > 0 ? gaussian_noise_bound(model.m(), sigma) : 0.0;
}

Measurement measure(const SensingModel& model, const Vec& f, SeededRng& rng) {
  if (f.rows() != model.n()) throw ShapeMismatch("measure: length mismatch");
  Measurement meas;
  meas.true_signal = f;
  meas.noise_draw = Vec::Zero(model.m());
  if (model.sigma > 0.0) {
    const bool complex_signal = f.imag().cwiseAbs().maxCoeff() > 0.0;
    for (Index i = 0; i < model.m(); ++i) {
      meas.noise_draw[i] = complex_signal
                               ? model.sigma * rng.normal_complex()
                               : Scalar(model.sigma * rng.normal(), 0.0);
    }
  }
  meas.y = model.phi * f + meas.noise_draw;
  return meas;
}

double relative_noise_level(const SensingModel& model, const Vec& f,
                            double sigma) {
  const double energy = (model.phi * f).norm();
  if (energy == 0.0) throw ZeroSignal("relative_noise_level: Phi f is zero");
  return std::sqrt(static_cast<double>(model.m())) * sigma / energy;
}

}  // namespace odl1
