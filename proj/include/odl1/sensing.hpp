#pragma once

#include "odl1/numkernel.hpp"
#include "odl1/rng.hpp"
#include "odl1/types.hpp"

namespace odl1 {

enum class SensingKind { Gaussian, PartialDftSignFlipped };

// Measurement operator y = Phi f + z with its noise description. `epsilon`
// is the noise-power bound handed to solvers and guarantees; when sigma > 0
// it defaults to the Gaussian tail bound sigma*sqrt(m + 2*sqrt(m*log m)).
struct SensingModel {
  Mat phi;  // m x n
  SensingKind kind = SensingKind::Gaussian;
  double sigma = 0.0;
  double epsilon = 0.0;

  Index m() const { return phi.rows(); }
  Index n() const { return phi.cols(); }
};

struct Measurement {
  Vec y;
  Vec true_signal;
  Vec noise_draw;
};

// i.i.d. N(0, 1/m) entries so ||Phi f||^2 concentrates at ||f||^2.
SensingModel gaussian_sensing(Index m, Index n, SeededRng& rng);

// m rows of the unitary n x n DFT chosen uniformly without replacement,
// scaled by sqrt(n/m), then i.i.d. +-1 column signs.
SensingModel partial_dft_signflip_sensing(Index m, Index n, SeededRng& rng);

// sigma * sqrt(m + 2*sqrt(m * ln m)): the high-probability bound on ||z||_2
// for z ~ N(0, sigma^2 I_m).
double gaussian_noise_bound(Index m, double sigma);

// Sets sigma on the model and refreshes the derived epsilon.
void set_noise_level(SensingModel& model, double sigma);

// y = Phi f + z with per-coordinate noise variance sigma^2. Real signals get
// real noise; complex signals get circular complex noise of the same total
// variance, keeping ||z||^2 comparable across the two cases.
Measurement measure(const SensingModel& model, const Vec& f, SeededRng& rng);

// sqrt(m) * sigma / ||Phi f||_2.
double relative_noise_level(const SensingModel& model, const Vec& f,
                            double sigma);

}  // namespace odl1
