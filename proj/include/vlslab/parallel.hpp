#pragma once

namespace vlslab {

// Execution policy for the hot kernels. Every Par kernel has a serial twin
// with identical arithmetic: parallel loops only split element-disjoint work,
// so Serial and Par produce bit-identical results (asserted in the tests).
enum class Exec { Serial, Par };

// Worker count used by Par kernels and the trial runner. 0 restores the
// OpenMP default. Returns 1 when built without OpenMP.
void set_max_threads(int n);
int max_threads();

bool openmp_enabled();

} // namespace vlslab
