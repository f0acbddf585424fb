#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace ftn {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

}  // namespace ftn
