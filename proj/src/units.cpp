#include "caskit/units.hpp"

#include <numbers>

namespace caskit::units {

double matsubara_si(double T_K, int n) {
    return 2.0 * std::numbers::pi * n * k_B_J_per_K * T_K / hbar_J_s;
}

} // namespace caskit::units
