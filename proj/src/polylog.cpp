#include "becdecay/polylog.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace becdecay {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// zeta(5/2 - j), j = 0..29.  Shared tail table for the half-integer orders.
constexpr double kZetaHalf[] = {
    1.3414872572509171798,    2.6123753486854883433,     -1.4603545088095868129,
    -0.20788622497735456602,  -0.02548520188983303595,   0.0085169287778503305424,
    0.0044410113354794319585, -0.0030916692472158338448, -0.002671458019899224599,
    0.0027467679395368687584, 0.0032690395726002200217,  -0.0044160328730048898084,
    -0.0066721722964666407568, 0.011146122473942814136,  0.020396978715942792056,
    -0.04057496748119457841,  -0.087175255906217251469,  0.20117404938422688243,
    0.49627121991205760787,   -1.3032292507051139539,    -3.6297592997745741279,
    10.687327069021993641,    33.168325785694607879,     -108.2174750587760554,
    -370.30187837547859954,   1326.0458117490156281,     4959.5983150430436114,
    -19338.941988374620291,   -78486.148569217686891,    331023.64874545032181};

// zeta(4 - j), j = 0..28.  zeta(1) slot is never touched (log term instead).
constexpr double kZetaInt[] = {
    1.0823232337111381915, 1.2020569031595942854, 1.6449340668482264365,
    0.0 /* unused zeta(1) */, -0.5,
    -1.0 / 12.0,  0.0, 1.0 / 120.0, 0.0, -1.0 / 252.0,
    0.0, 1.0 / 240.0, 0.0, -1.0 / 132.0, 0.0,
    691.0 / 32760.0, 0.0, -1.0 / 12.0, 0.0, 3617.0 / 8160.0,
    0.0, -43867.0 / 14364.0, 0.0, 174611.0 / 6600.0, 0.0,
    -77683.0 / 276.0, 0.0, 236364091.0 / 65520.0, 0.0};

double direct_series(double n, double z) {
  double sum = 0.0;
  double zk = 1.0;
  for (int k = 1; k <= 200; ++k) {
    zk *= z;
    const double term = zk / std::pow(static_cast<double>(k), n);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Expansion about z = 1 for nu in {1/2, 3/2, 5/2}:
//   g_nu(e^-a) = Gamma(1-nu) a^(nu-1) + sum_k zeta(nu-k) (-a)^k / k!
double half_order_near_one(double nu, double z) {
  const double a = -std::log(z);
  double sum;
  if (nu == 0.5) {
    sum = kSqrtPi / std::sqrt(a);
  } else if (nu == 1.5) {
    sum = -2.0 * kSqrtPi * std::sqrt(a);
  } else {
    sum = (4.0 * kSqrtPi / 3.0) * a * std::sqrt(a);
  }
  const std::size_t offset = static_cast<std::size_t>(2.5 - nu + 0.5);
  double term = 1.0;  // (-a)^k / k!
  for (std::size_t k = 0; k < 26; ++k) {
    if (k > 0) term *= -a / static_cast<double>(k);
    sum += kZetaHalf[offset + k] * term;
  }
  return sum;
}

// Same expansion for integer n; the k = n-1 term carries the log:
//   (-a)^(n-1)/(n-1)! * (H_{n-1} - ln a)
double int_order_near_one(int n, double z) {
  if (z == 1.0) return kZetaInt[4 - n];
  const double a = -std::log(z);
  const double harmonic = (n == 2) ? 1.0 : (n == 3) ? 1.5 : 11.0 / 6.0;
  double sum = 0.0;
  double term = 1.0;
  for (int k = 0; k < 26; ++k) {
    if (k > 0) term *= -a / static_cast<double>(k);
    if (k == n - 1) {
      sum += term * (harmonic - std::log(a));
    } else {
      sum += kZetaInt[4 - n + k] * term;
    }
  }
  return sum;
}

bool supported_order(double n) {
  return n == 0.5 || n == 1.0 || n == 1.5 || n == 2.0 || n == 2.5 ||
         n == 3.0 || n == 4.0;
}

}  // namespace

double polylog(double order, double z) {
  if (!supported_order(order)) {
    throw std::domain_error("polylog: unsupported order " + std::to_string(order));
  }
  if (!(z >= 0.0) || z > 1.0) {
    throw std::domain_error("polylog: fugacity " + std::to_string(z) +
                            " outside [0, 1]");
  }
  if (z == 1.0 && order <= 1.0) {
    throw std::domain_error("polylog: divergent at z = 1 for order <= 1");
  }
  if (z == 0.0) return 0.0;
  if (order == 1.0) return -std::log1p(-z);
  if (z <= 0.55) return direct_series(order, z);
  if (order == 2.0 || order == 3.0 || order == 4.0) {
    return int_order_near_one(static_cast<int>(order), z);
  }
  return half_order_near_one(order, z);
}

}  // namespace becdecay
