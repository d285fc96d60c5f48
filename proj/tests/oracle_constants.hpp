// Frozen reference values for the test suite.
// Computed with an independent 50-digit implementation (spherical Bessel
// functions by half-order Bessel evaluation; potentials by adaptive
// quadrature); frozen here so tests do not depend on the library under test.
#pragma once
#include <complex>
namespace oracle {
using cd = std::complex<double>;

// Riccati-Bessel psi_n(z), psi_n'(z), xi_n(z), xi_n'(z)
inline constexpr double psi_1_z1  = 0.30116867893975679;
inline constexpr double dpsi_1_z1 = 0.54030230586813972;
inline constexpr cd     xi_1_z1  {0.30116867893975679, -1.3817732906760362};
inline constexpr cd     dxi_1_z1 {0.54030230586813972, 0.84147098480789651};
inline constexpr double psi_2_z1  = 0.062035052011373861;
inline constexpr double dpsi_2_z1 = 0.17709857491700907;
inline constexpr cd     xi_2_z1  {0.062035052011373861, -3.605017566159969};
inline constexpr cd     dxi_2_z1 {0.17709857491700907, 5.8282618416439017};
inline constexpr double psi_3_z1  = 0.0090065811171125163;
inline constexpr double dpsi_3_z1 = 0.035015308660036312;
inline constexpr cd     xi_3_z1  {0.0090065811171125163, -16.643314540123809};
inline constexpr cd     dxi_3_z1 {0.035015308660036312, 46.324926054211457};
inline constexpr double psi_4_z1  = 0.0010110158084137527;
inline constexpr double dpsi_4_z1 = 0.0049625178834575054;
inline constexpr cd     xi_4_z1  {0.0010110158084137527, -112.89818421470669};
inline constexpr cd     dxi_4_z1 {0.0049625178834575054, 434.94942231870296};
inline constexpr double psi_1_z2  = 0.87079554995998323;
inline constexpr double dpsi_1_z2 = 0.47389965184569008;
inline constexpr cd     xi_1_z2  {0.87079554995998323, -0.7012240085521105};
inline constexpr cd     dxi_1_z2 {0.47389965184569008, 0.76675884082319764};
inline constexpr double psi_2_z2  = 0.39689589811429316;
inline constexpr double dpsi_2_z2 = 0.47389965184569008;
inline constexpr cd     xi_2_z2  {0.39689589811429316, -1.4679828493753081};
inline constexpr cd     dxi_2_z2 {0.47389965184569008, 0.76675884082319764};
inline constexpr double psi_3_z2  = 0.12144419532574966;
inline constexpr double dpsi_3_z2 = 0.21472960512566867;
inline constexpr cd     xi_3_z2  {0.12144419532574966, -2.9687331148861598};
inline constexpr cd     dxi_3_z2 {0.21472960512566867, 2.9851168229539316};
inline constexpr double psi_4_z2  = 0.028158785525830643;
inline constexpr double dpsi_4_z2 = 0.065126624274088372;
inline constexpr cd     xi_4_z2  {0.028158785525830643, -8.9225830527262513};
inline constexpr cd     dxi_4_z2 {0.065126624274088372, 14.876432990566343};

// sphere operator eigenvalue closed forms at kappa=1 (unit sphere):
// electric family: -c1 = -i psi' xi', c2 = -i psi xi;  magnetic: +-m,
// m = -(i/2)(psi xi' + psi' xi);  identity c1 c2 + m^2 = 1/4 holds exactly.
inline constexpr cd c1_n1 {-0.45464871341284085, 0.29192658172642881};
inline constexpr cd c2_n1 {-0.41614683654714239, -0.090702573174318305};
inline constexpr cd m_n1  {-0.24657529513926965, -0.16272213168641204};
inline constexpr cd c1_n2 {-1.0321768663983178, 0.031363905237635473};
inline constexpr cd c2_n2 {-0.22363745221865008, -0.0038483476780538601};
inline constexpr cd m_n2  {-0.13844347351771495, -0.010986319306116848};
inline constexpr cd c1_n3 {-1.6220815844415722, 0.001226071840557614};
inline constexpr cd c2_n3 {-0.14989936246324328, -8.1118503419127741e-5};
inline constexpr cd m_n3  {-0.082770795748505468, -0.00031536821778734941};

// interior Maxwell eigenvalues of the unit ball, in (2, 8):
// TE family: zeros of j_n;  TM family: zeros of psi_n'
inline constexpr struct { const char* kind; int n; double kappa; } resonance_table[] = {
  {"TM", 1, 2.7437072699922694},
  {"TM", 2, 3.8702385802221650},
  {"TE", 1, 4.4934094579090642},
  {"TM", 3, 4.9734203508228420},
  {"TE", 2, 5.7634591968945498},
  {"TM", 4, 6.0619493629823715},
  {"TM", 1, 6.1167642644617689},
  {"TE", 3, 6.9879320005005200},
  {"TM", 5, 7.1402273640029826},
  {"TM", 2, 7.4430870539544580},
  {"TE", 1, 7.7252518369377072},
};
inline constexpr double j1_first_zero   = 4.4934094579090642;
inline constexpr double tm1_first_zero  = 2.7437072699922694;

// Mie scattering/interior coefficients, ke=1, ki=2, mu equal, r=1.
// Convention: incident d=+z, p=+x;  scattered E uses outgoing xi_n;
// a_n multiplies TM (electric) outgoing, b_n TE (magnetic) outgoing;
// c_n, d_n the matching interior regular coefficients.
inline constexpr cd mie_a1 {0.12414272608585072, -0.32974430949725904};
inline constexpr cd mie_b1 {0.0081419309520260429, -0.089864564275349843};
inline constexpr cd mie_c1 {0.82615564327732967, 0.31103255089989616};
inline constexpr cd mie_d1 {0.97127055613517607, 0.087999289459168218};
inline constexpr cd mie_a2 {0.00030793264654890372, -0.017545307749768686};
inline constexpr cd mie_b2 {4.022931724399355e-6, -0.0020057207034928108};
inline constexpr cd mie_c2 {0.31561699838771094, 0.0055393031000342657};
inline constexpr cd mie_d2 {0.34903591166644512, 0.00070007137063120312};
inline constexpr cd mie_a3 {1.9643378521580877e-7, -0.00044320846858964326};
inline constexpr cd mie_b3 {9.058397605651222e-10, -3.0097171955925968e-5};
inline constexpr cd mie_c3 {0.13490177322642309, 5.9789620066411704e-5};
inline constexpr cd mie_d3 {0.15657393559375503, 4.7124326676500314e-6};
inline constexpr cd mie_a4 {4.4995876606043962e-11, -6.7078965856682177e-6};
inline constexpr cd mie_b4 {8.9211083456456158e-14, -2.9868224496352005e-7};
inline constexpr cd mie_c4 {0.062798345872129749, 4.2124480988022524e-7};
inline constexpr cd mie_d4 {0.074203235119558515, 2.2163188849067628e-8};
inline constexpr cd mie_a5 {4.366755274615081e-15, -6.6081429120555965e-8};
inline constexpr cd mie_b5 {4.3069705172553774e-18, -2.0753241956994038e-9};
inline constexpr cd mie_c5 {0.03009400126972901, 1.9886546118595275e-9};
inline constexpr cd mie_d5 {0.03591241915669492, 7.4529912401987748e-11};
inline constexpr double mie_Csca = 2.5033160959263605;
inline constexpr double mie_Cext = 2.5033160959263605;

// far-field amplitudes S1, S2 at theta = 30, 90, 150 deg (canonical config)
inline constexpr cd mie_S1_30 {0.19746296302921023, -0.65293428403751327};
inline constexpr cd mie_S2_30 {0.17387269318394449, -0.58956688374053526};
inline constexpr cd mie_S1_90 {0.18620385992020711, -0.48921540851620343};
inline constexpr cd mie_S2_90 {0.0114430641709181, -0.090929880742437924};
inline constexpr cd mie_S1_150 {0.17497621789495708, -0.34344508891612009};
inline constexpr cd mie_S2_150 {-0.14867706450400133, 0.27598771646623223};

// mu-contrast config: ke=1, ki=1.5, mu_i/mu_e = 2, r=1
inline constexpr cd mieMu_a1 {0.0024456446349484553, -0.049392949469210716};
inline constexpr cd mieMu_b1 {0.026482263897313212, -0.16056448423043707};
inline constexpr cd mieMu_c1 {1.2408115072813088, 0.061437594603587272};
inline constexpr cd mieMu_d1 {1.3000805312924661, 0.21442522536948292};
inline constexpr cd mieMu_a2 {4.3768098477064528e-6, -0.0020920780796237051};
inline constexpr cd mieMu_b2 {7.8782299266508456e-5, -0.0088755897052438571};
inline constexpr cd mieMu_c2 {0.72846119697912479, 0.0015240043723338177};
inline constexpr cd mieMu_d2 {0.73833804809482905, 0.0065537018943642538};

// int over triangle (0,0,0),(1,0,0),(0,1,0) of 1/|x-y| dx, adaptive quadrature
inline constexpr double tripot_0 = 1.1397609743568347;  // y=(0.2,0.2,0.3), quad err<2e-14
inline constexpr double tripot_1 = 0.23122315654651565;  // y=(2.0,-1.0,0.5), quad err<5e-15
inline constexpr double tripot_2 = 2.3707144571862053;  // y=(0.25,0.25,0.0), quad err<3e-14
inline constexpr double tripot_3 = 0.25709936560487978;  // y=(1.5,1.5,1.0), quad err<6e-15

inline constexpr double selfint_ref = 1.0030658847731819;  // quad err<1e-12
inline constexpr double edgeint_ref = 0.48353891435050739;  // quad err<1e-12
inline constexpr double vertint_ref = 0.26432137448369653;  // quad err<9e-13

} // namespace oracle
