#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace rotrate {

/// Identifier of the tableau used by rk8_step, recorded in run metadata.
inline constexpr std::string_view kRk8TableauId = "dop853-order8-12stage";

namespace dop853 {
// Dormand-Prince 8(5,3) coefficients; only the 8th-order solution is used.
inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;
inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;
}  // namespace dop853

/// One fixed step of the 8th-order explicit scheme for an autonomous system
/// y' = f(y). f is called as f(const State&, State&). When carry is given the
/// increment is added with compensated summation and carry keeps the
/// rounding error for the next step.
template <std::size_t Dim, typename F>
void rk8_step(std::array<double, Dim>& y, double h, F&& f,
              std::array<double, Dim>* carry = nullptr) {
  using State = std::array<double, Dim>;
  using namespace dop853;
  State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, tmp;
  auto stage = [&](State& out, auto&& combine) {
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * combine(i);
    f(tmp, out);
  };
  f(y, k1);
  stage(k2, [&](std::size_t i) { return a21 * k1[i]; });
  stage(k3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
  stage(k4, [&](std::size_t i) { return a41 * k1[i] + a43 * k3[i]; });
  stage(k5, [&](std::size_t i) { return a51 * k1[i] + a53 * k3[i] + a54 * k4[i]; });
  stage(k6, [&](std::size_t i) { return a61 * k1[i] + a64 * k4[i] + a65 * k5[i]; });
  stage(k7, [&](std::size_t i) {
    return a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i];
  });
  stage(k8, [&](std::size_t i) {
    return a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i];
  });
  stage(k9, [&](std::size_t i) {
    return a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i];
  });
  stage(k10, [&](std::size_t i) {
    return a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
           a108 * k8[i] + a109 * k9[i];
  });
  stage(k11, [&](std::size_t i) {
    return a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
           a118 * k8[i] + a119 * k9[i] + a1110 * k10[i];
  });
  stage(k12, [&](std::size_t i) {
    return a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
           a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i];
  });
  for (std::size_t i = 0; i < Dim; ++i) {
    const double inc = h * (b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                            b10 * k10[i] + b11 * k11[i] + b12 * k12[i]);
    if (carry) {
      const double d = inc + (*carry)[i];
      const double next = y[i] + d;
      (*carry)[i] = d - (next - y[i]);
      y[i] = next;
    } else {
      y[i] += inc;
    }
  }
}

}  // namespace rotrate
