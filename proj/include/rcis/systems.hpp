/*
 * systems.hpp
 *
 * Built-in benchmark systems. All of them are expression-backed so the
 * interval image method works uniformly; the linear benchmark also
 * exposes its affine structure for the input transformation.
 */

#ifndef RCIS_SYSTEMS_HPP_
#define RCIS_SYSTEMS_HPP_

#include <string>
#include <vector>

#include "rcis/dynamics.hpp"

namespace rcis {

/* builtin names:
 *   example1_linear      planar linear benchmark, x+ = Ax + Bu + Gw
 *   example1_transformed disturbance-cancelled variant (1 input, 1 w)
 *   example2_nonlinear   planar input-affine nonlinear benchmark
 *   shift2d              x+ = x + (1.5, 1.5), autonomous
 *   rotation2d           x+ = R(1 rad) x, autonomous
 *   identity             x+ = x, autonomous
 */
const std::vector<std::string>& builtin_system_names();

bool is_builtin_system(const std::string& name);

SystemModel make_builtin_system(const std::string& name);

/* affine structure of example1_linear (B is a column, so the
 * transformation needs input augmentation first) */
AffineParts example1_affine_parts();

/* the full pipeline behind example1_transformed: augment B with the
 * column (1,0), then cancel the disturbance; exposes the v-bounds */
TransformResult example1_transform();

}  // namespace rcis

#endif  // RCIS_SYSTEMS_HPP_
