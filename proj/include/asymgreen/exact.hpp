#pragma once

#include <complex>
#include <string>
#include <string_view>

#include "asymgreen/special.hpp"

namespace asymgreen {

using cplx = std::complex<double>;

// Closed-form G(x, y; k) for the builtin examples, x >= y.  Throws
// UnsupportedDomainError outside the geometry a form covers or when its
// series leave the trusted range.
cplx exact_green(std::string_view example, double x, double y, cplx k);
// Whether the closed form is elementary (no series), so it can serve as the
// default reference on long sweeps.
bool exact_is_elementary(std::string_view example, double x, double y);
bool has_exact_green(std::string_view example);

// Time-domain G_F(x, y; t) for ex1 and ex2.
double exact_GF_time(std::string_view example, double x, double y, double t);

}  // namespace asymgreen
