#pragma once

#include "asymgreen/diff_poly.hpp"
#include "asymgreen/xi_poly.hpp"

namespace asymgreen {

// Orders above this need an explicit max_order argument; term counts grow
// combinatorially.
inline constexpr int kDefaultMaxOrder = 12;

// M g = -f[(xi - 1/xi) g + g(x,0)/xi] + (1/xi) int_0^xi dg/dx dxi.
XiPoly apply_M(const XiPoly& g);

// c~_n = -M^{n-1} f.  Memoized; safe to call from several threads.
XiPoly gen_c_tilde(int n, int max_order = kDefaultMaxOrder);
// K_n = -(1 + xi d/dxi) c~_{n+1}
XiPoly gen_K(int n, int max_order = kDefaultMaxOrder);
// F basis: c~_n(x, -1).  VS basis: s_2 = -V_S, s_{n+1} = s_n' + sum s_j s_{n+1-j}.
DiffPoly gen_s(int n, Basis basis, int max_order = kDefaultMaxOrder);
// alpha_{2i} = 1/2 sum_m (2^m/m) sum_{j_1+..+j_m=i} s_{2j_1}..s_{2j_m}
DiffPoly gen_alpha(int n, Basis basis, int max_order = kDefaultMaxOrder);

}  // namespace asymgreen
