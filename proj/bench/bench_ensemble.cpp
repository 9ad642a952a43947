// Wall-clock comparison of the serial reference ensemble against the OpenMP
// kernel, verifying along the way that both produce identical bits.

#include <cstring>
#include <iostream>

#include <omp.h>

#include "qbeat/montecarlo.hpp"

namespace {

bool identical(const qbeat::BeatTrace& a, const qbeat::BeatTrace& b) {
  return a.ps_mean.size() == b.ps_mean.size() &&
         std::memcmp(a.ps_mean.data(), b.ps_mean.data(), a.ps_mean.size() * sizeof(double)) == 0 &&
         std::memcmp(a.ps_stderr.data(), b.ps_stderr.data(),
                     a.ps_stderr.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  const int n_traj = argc > 1 ? std::atoi(argv[1]) : 4000;

  const qbeat::CrystalParams params = qbeat::CrystalParams::rubrene();
  const qbeat::FieldSpec field{qbeat::Vec3(0.0, 0.3, 0.0)};
  qbeat::MonteCarloParams mc;
  mc.tau_hop_ns = 0.150;
  mc.n_traj = n_traj;
  mc.t_max_ns = 10.0;
  mc.dt_ns = 0.01;
  mc.master_seed = 7;

  std::cout << "ensemble: n_traj = " << mc.n_traj << ", t_max = " << mc.t_max_ns
            << " ns, dt = " << mc.dt_ns << " ns, tau_hop = " << mc.tau_hop_ns * 1000.0
            << " ps\n";

  const double t0 = omp_get_wtime();
  const qbeat::BeatTrace serial = qbeat::ensemble_beats_reference(params, field, mc);
  const double t1 = omp_get_wtime();
  const double serial_s = t1 - t0;
  std::cout << "serial reference: " << serial_s << " s\n";

  const int max_threads = omp_get_max_threads();
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    const double ta = omp_get_wtime();
    const qbeat::BeatTrace parallel = qbeat::ensemble_beats(params, field, mc);
    const double tb = omp_get_wtime();
    const double par_s = tb - ta;
    std::cout << "openmp x" << threads << ": " << par_s << " s, speedup " << serial_s / par_s
              << (identical(serial, parallel) ? ", bit-identical" : ", MISMATCH") << "\n";
    if (!identical(serial, parallel)) return 1;
  }
  return 0;
}
