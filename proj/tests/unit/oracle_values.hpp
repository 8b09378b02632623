#pragma once

// Frozen outputs of tests/oracles/compute_oracles.py (scipy DOP853 / solve_bvp,
// mpmath Legendre functions, bounded scalar minimisation).

namespace oracle {

// u'' + 2 coth r u' = 0.5 u (u^2 - 1), u(0) = 0.5
inline constexpr double radial_n3_k05_u2 = 0.402158278300881;
inline constexpr double radial_n3_k05_u5 = 0.193933023528025;
inline constexpr double radial_n3_k05_u10 = 0.0464659660156513;
inline constexpr double radial_n3_k1_u15 = 7.12098779258421e-06;

// radial Dirichlet problem on the disk of radius 4 in H^2, k = 2/9
inline constexpr double disk_pole_c05 = 0.717691386295683;
inline constexpr double disk_pole_cm08 = -0.914160297100626;

// U'' + (n-1) tanh t U' = f(U) on [-8, 8]
inline constexpr double hyp_n2_U1 = 0.626184095020778;
inline constexpr double hyp_n2_U2 = 0.892571155172838;
inline constexpr double hyp_n2_U4 = 0.992369542636638;
inline constexpr double hyp_n3_k1_U1 = 0.854502703968062;
inline constexpr double hyp_n3_k1_U2 = 0.989165452118203;

// P_nu^{-m}(cosh r) ratios, nu(nu+1) = -2/9: v(3)/v(10) and v(6)/v(10)
inline constexpr double mode_ratio[3][2] = {{8.16160930078255, 3.55592809792736},
                                            {5.92867285458713, 3.30729829569079},
                                            {4.81803858943446, 3.1787163718677}};

// signed distance to {z2 = 0}, brute-force minimum over the geodesic
inline constexpr double t_brute[3][3] = {{0.0, 0.5, 1.09861228866811},
                                         {0.3, -0.4, -0.927737294614871},
                                         {-0.6, 0.7, 2.92959702375734}};

inline constexpr double n10_k2_alpha_minus = 0.227998127341235;
inline constexpr double n10_k2_beta_minus = 0.468871125850725;

}  // namespace oracle
