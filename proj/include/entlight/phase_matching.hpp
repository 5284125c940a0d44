#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cavity.hpp"
#include "errors.hpp"

namespace entlight {

// A family of pump modes: one common in-plane direction and a list of
// distinct positive magnitudes, given in units of k0.
struct PumpSpec {
    double dir_x = 1.0;
    double dir_y = 0.0;
    std::vector<double> magnitudes_k0; // |kp| / k0, ordered as given

    void validate() const {
        if (!(std::hypot(dir_x, dir_y) > 0.0))
            throw invalid_params("pump direction must be a nonzero vector");
        if (magnitudes_k0.empty()) throw invalid_params("pump list must not be empty");
        for (size_t i = 0; i < magnitudes_k0.size(); ++i) {
            if (!(magnitudes_k0[i] > 0.0))
                throw invalid_params("pump magnitudes must be positive");
            for (size_t j = 0; j < i; ++j)
                if (magnitudes_k0[i] == magnitudes_k0[j])
                    throw invalid_params("pump magnitudes must be pairwise distinct");
        }
    }

    WaveVector wave_vector(const CavityParams& p, size_t n) const {
        const double inv = 1.0 / std::hypot(dir_x, dir_y);
        const double k = magnitudes_k0[n] * p.k0();
        return {k * dir_x * inv, k * dir_y * inv};
    }
};

// Residual of the two-pump energy balance when a pump pair at kp scatters
// to the upper branch at kp+q and the lower branch at kp-q:
//
//   E_2(kp+q) + E_1(kp-q) - 2 E_2(kp).
inline double phase_mismatch(const CavityParams& p, const WaveVector& kp, const WaveVector& q) {
    return polariton_energy(p, 2, kp + q) + polariton_energy(p, 1, kp - q) -
           2.0 * polariton_energy(p, 2, kp);
}

// Transverse momentum transfer that balances the pair energy exactly.
//
// For q perpendicular to kp, |kp+q| = |kp-q| and the branch sum collapses:
// E_2 + E_1 at equal modulus equals E_C + E_X, so the balance reduces to a
// closed form for the photon dispersion,
//
//   |q|^2 = k0^2 [ ((2 E_2(kp) - E_X) / E_C(0))^2 - 1 ] - |kp|^2.
//
// The right-hand side is positive for every valid parameter set (the pump
// sits above the lower branch), but the guard stays: a negative radicand
// means no transverse solution exists.
//
// Orientation: q points along z x kp, i.e. (-kp_y, +kp_x) normalized.  For
// kp = 0 only the modulus is meaningful and the y-axis is used.
inline WaveVector solve_scattering_vector(const CavityParams& p, const WaveVector& kp) {
    p.validate();
    const double ex = p.exciton_energy();
    const double target = (2.0 * polariton_energy(p, 2, kp) - ex) / p.ec0;
    const double q_sq = p.k0() * p.k0() * (target * target - 1.0) - kp.dot(kp);
    if (!(q_sq > 0.0))
        throw no_phase_matching("no transverse wave vector balances the pair energy");
    const double q_mod = std::sqrt(q_sq);
    const double kp_mod = kp.modulus();
    if (kp_mod == 0.0) return {0.0, q_mod};
    const double scale = q_mod / kp_mod;
    return {-kp.ky * scale, kp.kx * scale};
}

// One scheduled pump with its solved transverse transfer, normalized pair
// amplitudes, and the two product-mode energies entering the dephasing
// model: e1 at the lower branch, e2 at the upper, both at modulus
// sqrt(|kp|^2 + |q|^2).
struct PairChannel {
    WaveVector kp;
    WaveVector q;
    double alpha = 0.0;
    double beta = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

inline std::vector<PairChannel> build_pairs(const CavityParams& p, const PumpSpec& pumps) {
    p.validate();
    pumps.validate();
    std::vector<PairChannel> out;
    out.reserve(pumps.magnitudes_k0.size());
    for (size_t n = 0; n < pumps.magnitudes_k0.size(); ++n) {
        PairChannel ch;
        ch.kp = pumps.wave_vector(p, n);
        ch.q = solve_scattering_vector(p, ch.kp);
        const auto [a, b] = pair_amplitudes(p, ch.kp, ch.q);
        ch.alpha = a;
        ch.beta = b;
        const double mod = (ch.kp + ch.q).modulus();
        ch.e1 = polariton_energy(p, 1, mod);
        ch.e2 = polariton_energy(p, 2, mod);
        out.push_back(ch);
    }
    return out;
}

} // namespace entlight
