// Prints a coarse (theta, lambda) phase map at fixed gamma, with the analytic boundary overlaid.
//
//   phase_slice [gamma] [j_ratio]
//
// Legend: '.' normal, 'S' superradiant, 'C' chiral superradiant, '|' analytic boundary cell.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tdt/tdt.hpp"

int main(int argc, char** argv) {
  const double gamma = argc > 1 ? std::atof(argv[1]) : 0.9;
  const double j = argc > 2 ? std::atof(argv[2]) : 0.1;
  const int n_lambda = 24;
  const int n_theta = 48;
  const double l_max = 1.0;

  std::printf("gamma = %g, J/omega = %g, theta_c = %.6f\n", gamma, j, tdt::boundaries::theta_c(j));
  std::printf("rows: lambda from %.2f (top) down to 0; columns: theta from -pi to pi\n", l_max);
  for (int r = n_lambda - 1; r >= 0; --r) {
    const double lambda = l_max * (r + 0.5) / n_lambda;
    std::printf("%5.3f ", lambda);
    for (int c = 0; c < n_theta; ++c) {
      const double theta = -tdt::kPi + 2.0 * tdt::kPi * (c + 0.5) / n_theta;
      const tdt::ModelParams p{1.0, 1.0, lambda, gamma, j, theta};
      const auto sol = tdt::meanfield::minimize_energy(p);
      char ch = '.';
      if (sol.phase == tdt::meanfield::Phase::SR) ch = 'S';
      if (sol.phase == tdt::meanfield::Phase::CSR) ch = 'C';
      if (tdt::boundaries::second_order_valid(gamma)) {
        const double lc = tdt::boundaries::boundary_product(theta, j) / gamma;
        if (std::abs(lambda - lc) < 0.5 * l_max / n_lambda) ch = '|';
      }
      std::putchar(ch);
    }
    std::putchar('\n');
  }
  return 0;
}
