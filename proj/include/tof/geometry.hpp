#ifndef TOF_GEOMETRY_HPP
#define TOF_GEOMETRY_HPP

#include <cstddef>
#include <string>

#include "tof/current.hpp"
#include "tof/model.hpp"

// Three-dimensional detection geometries.
//
// The full state is a product Psi_x Psi_y Psi_z of one-dimensional
// factors: two are ground Gaussians spreading freely, one carries the
// two-packet superposition, and only z feels gravity.  The flux through
// an infinite detector plane therefore factorizes into the 1D current
// along the plane normal times transverse marginals that integrate to
// one (interference included: marginalizing a coherent pair preserves
// unit norm).  Each scenario reduces to a 1D law:
//
//   pi1  superposition along z, plane z = H:  the full quantum law.
//   pi2  superposition along z, plane x = X:  free single-packet law at
//        X (the z marginal integrates to one, gravity drops out).
//   pi3  superposition along x, plane z = H:  single falling packet at
//        H (the coherent x marginal integrates to one).
//   pi4  superposition along x, plane x = X:  quantum law with g = 0 and
//        detector X, separation kept.
//
// plane_flux_quadrature certifies the reductions by integrating the
// honest 3D current over the plane.

namespace tof {

enum class Scenario { pi1, pi2, pi3, pi4 };

const char* scenario_name(Scenario s);

// Accepts "pi1" .. "pi4"; throws Error{UsageError} otherwise.
Scenario parse_scenario(const std::string& name);

// The 1D configuration whose quantum_tof equals the scenario's plane
// flux.  X is the transverse plane coordinate, used by pi2 and pi4.
ValidatedConfig reduced_config(Scenario s, const ValidatedConfig& cfg,
                               double X);

// Evaluates the scenario signal on the given grid, or on the reduced
// configuration's automatic window when grid is null.
TofSignal geometry_tof(Scenario s, const ValidatedConfig& cfg, double X,
                       const TimeGrid* grid = nullptr,
                       bool with_channels = false);

// Signed flux through the detector plane at time t by 2D trapezoid
// quadrature (n_nodes per axis) of the exact 3D current over +-8 sigma
// windows that track the falling packet centers.  |result| should match
// the reduced 1D law to quadrature accuracy.
double plane_flux_quadrature(Scenario s, double t, const ValidatedConfig& cfg,
                             double X, std::size_t n_nodes = 256);

}  // namespace tof

#endif  // TOF_GEOMETRY_HPP
