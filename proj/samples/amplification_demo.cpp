// Prints the detection-probability peaks for a few Fock and coherent inputs.
#include <cstdio>

#include "photamp/photamp.hpp"

int main() {
  using namespace photamp;

  std::printf("Fock inputs, n_e = 10\n");
  for (unsigned n : {0u, 1u, 5u, 10u}) {
    const double tp = perception_time(10, n);
    std::printf("  n=%-3u tau_p=%.6f  P=%.6f  threshold(0.01)=%.6f\n", n, tp,
                ground_projection_probability(10, n, tp), threshold_time(10, n));
  }

  std::printf("Coherent input, n_e = 25\n");
  for (double intensity : {0.1, 0.5, 0.9}) {
    const auto input = CoherentInput::from_intensity(intensity);
    const double tau = 1.5707;
    std::printf("  |alpha|^2=%.1f  P(pi/2)=%.6f  gain(%.4f)=%.2f\n", intensity,
                coherent_probability(25, input, 1.5707963267948966), tau,
                intensity_gain(25u, input, tau));
  }
}
