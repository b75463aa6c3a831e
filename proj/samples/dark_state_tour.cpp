// Prints the bright/dark decomposition of the bomb state, the posterior at a
// few screen positions, and the threshold and optimal efficiencies.
#include <cstdio>

#include "ifm/ifm.hpp"

int main() {
  const ifm::ApparatusGeometry g{1000.0, 500.0, 6e6, ifm::k_wavenumber};
  const auto d = ifm::decomposition_coefficients(g);
  std::printf("bomb state = %.6f |no bomb> + %.6f |dark>\n", d.bright, d.dark);

  ifm::ClassifierConfig cfg;
  for (double x2 : {0.0, 6000.0, 12000.0, 30000.0}) {
    const auto c = ifm::classify(x2, g, cfg);
    std::printf("x2 = %8.0f  P(bomb|x2) = %.6f  %s\n", x2, c.posterior, ifm::to_string(c.label));
  }

  const auto eff = ifm::eta_tilde(g, cfg, ifm::BinWindow::symmetric(1e6, 10.0));
  std::printf("threshold efficiency %.5f, optimal %.5f\n", eff.eta_tilde,
              ifm::eta_optimal(g.ratio()));
}
