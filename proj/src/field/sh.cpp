// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/field.hpp"

namespace cagewarp {

namespace {

constexpr double kShC2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005, -1.0925484305920792,
                             0.5462742152960396};

}  // namespace

void eval_sh_basis(const UnitDir3& d, int degree, std::span<double> out) {
  if (degree < 0 || degree > 2) throw InvalidArgument("spherical harmonics degree must be 0, 1 or 2");
  if (out.size() < static_cast<std::size_t>(sh_coefficient_count(degree))) {
    throw InvalidArgument("spherical harmonics output buffer too small");
  }
  const double x = d.x();
  const double y = d.y();
  const double z = d.z();
  out[0] = kShC0;
  if (degree >= 1) {
    out[1] = -kShC1 * y;
    out[2] = kShC1 * z;
    out[3] = -kShC1 * x;
  }
  if (degree >= 2) {
    out[4] = kShC2[0] * x * y;
    out[5] = kShC2[1] * y * z;
    out[6] = kShC2[2] * (2.0 * z * z - x * x - y * y);
    out[7] = kShC2[3] * x * z;
    out[8] = kShC2[4] * (x * x - y * y);
  }
}

std::vector<double> eval_sh_basis(const UnitDir3& d, int degree) {
  std::vector<double> out(static_cast<std::size_t>(sh_coefficient_count(std::clamp(degree, 0, 2))));
  eval_sh_basis(d, degree, out);
  return out;
}

}  // namespace cagewarp
