#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "errors.hpp"
#include "math.hpp"

namespace entlight {

// Planar-cavity model parameters.  Natural units: energies in eV, wave
// vectors in eV (hbar = c = 1), times in 1/eV.
//
//   ec0      cavity photon energy at normal incidence
//   omega_r  Rabi splitting (half the branch splitting at zero detuning)
//   eb       exciton binding energy (overall scale of the pair potential)
//   delta    detuning knob: exciton energy = ec0 - 2*omega_r*delta
struct CavityParams {
    double ec0 = 1.5;
    double omega_r = 0.002;
    double eb = 0.010;
    double delta = 0.0;

    double exciton_energy() const { return ec0 - 2.0 * omega_r * delta; }
    double saturation_ratio() const { return 2.0 * omega_r / eb; } // dimensionless
    double k0() const { return ec0; } // in-plane wave-vector scale

    void validate() const {
        if (!(ec0 > 0.0)) throw invalid_params("ec0 must be positive");
        if (!(omega_r > 0.0)) throw invalid_params("omega_r must be positive");
        if (!(eb > 0.0)) throw invalid_params("eb must be positive");
        if (!(exciton_energy() > 0.0))
            throw invalid_params("detuning pushes the exciton energy below zero");
        if (!std::isfinite(delta)) throw invalid_params("delta must be finite");
    }
};

// In-plane wave vector (two components, eV).
struct WaveVector {
    double kx = 0.0;
    double ky = 0.0;

    double modulus() const { return std::hypot(kx, ky); }

    WaveVector operator+(const WaveVector& o) const { return {kx + o.kx, ky + o.ky}; }
    WaveVector operator-(const WaveVector& o) const { return {kx - o.kx, ky - o.ky}; }
    WaveVector operator*(double s) const { return {kx * s, ky * s}; }
    double dot(const WaveVector& o) const { return kx * o.kx + ky * o.ky; }

    static WaveVector in_k0_units(const CavityParams& p, double x, double y) {
        return {x * p.k0(), y * p.k0()};
    }
};

// Photon dispersion: ec0 * sqrt(1 + (k/k0)^2) with k0 = ec0.
inline double photon_energy(const CavityParams& p, double k_modulus) {
    const double x = k_modulus / p.k0();
    return p.ec0 * std::sqrt(1.0 + x * x);
}

inline double photon_energy(const CavityParams& p, const WaveVector& k) {
    return photon_energy(p, k.modulus());
}

namespace detail {

inline void require_branch(int branch) {
    if (branch != 1 && branch != 2)
        throw invalid_branch("polariton branch must be 1 (lower) or 2 (upper)");
}

} // namespace detail

// Polariton branches: eigenvalues of the 2x2 photon-exciton block.
// Branch 1 is the lower branch, branch 2 the upper.
inline double polariton_energy(const CavityParams& p, int branch, double k_modulus) {
    detail::require_branch(branch);
    const double ec = photon_energy(p, k_modulus);
    const double ex = p.exciton_energy();
    const double root = std::sqrt((ec - ex) * (ec - ex) + 4.0 * p.omega_r * p.omega_r);
    return 0.5 * (ec + ex + (branch == 1 ? -root : root));
}

inline double polariton_energy(const CavityParams& p, int branch, const WaveVector& k) {
    return polariton_energy(p, branch, k.modulus());
}

// Photon/exciton mixing coefficients of the branch rotation at |k|:
//
//   m11 = m22 = 1/sqrt(1 + rho^2),  m12 = -m21 = sqrt(1 - m11^2) >= 0,
//   rho = (E_2(k) - E_C(k)) / omega_r  (positive, so m11 > 0).
//
// m11^2 is the photon fraction of the upper branch and increases strictly
// with |k|.
struct HopfieldCoeffs {
    double m11 = 1.0;
    double m12 = 0.0;

    double coeff(int row, int col) const {
        detail::require_branch(row);
        detail::require_branch(col);
        if (row == col) return m11;
        return row == 1 ? m12 : -m12;
    }
};

inline HopfieldCoeffs hopfield(const CavityParams& p, double k_modulus) {
    const double ec = photon_energy(p, k_modulus);
    const double rho = (polariton_energy(p, 2, k_modulus) - ec) / p.omega_r;
    HopfieldCoeffs h;
    h.m11 = 1.0 / std::sqrt(1.0 + rho * rho);
    h.m12 = std::sqrt(std::max(0.0, 1.0 - h.m11 * h.m11));
    return h;
}

inline HopfieldCoeffs hopfield(const CavityParams& p, const WaveVector& k) {
    return hopfield(p, k.modulus());
}

// Branch-resolved two-body potential assembled from precomputed mixing
// coefficients.  The saturation ratio enters only as the prefactor of the
// anharmonic part, so it is a separate argument here; the physical value is
// params.saturation_ratio(), but sweeps may turn the knob independently.
//
//   V/eb = 12 * m(1,j1;kq) m(1,j2;kpq) m(1,j3;k) m(1,j4;kp)
//        - (8 pi / 7) * sat * [ m(2,j1;kq) m(1,j2;kpq) m(1,j3;k) m(1,j4;kp)
//                             + m(2,j4;kp) m(1,j3;k) m(1,j2;kpq) m(1,j1;kq) ]
inline double effective_potential_from_coeffs(double eb, double saturation,
                                              const HopfieldCoeffs& at_k_plus_q,
                                              const HopfieldCoeffs& at_kp_minus_q,
                                              const HopfieldCoeffs& at_k,
                                              const HopfieldCoeffs& at_kp,
                                              int j1, int j2, int j3, int j4) {
    // Grouped so that exchanging j1 with j2 (or j3 with j4) permutes factors
    // only inside one product, which IEEE multiplication does not see: the
    // branch-exchange symmetry of the direct term is exact in floating point.
    const double direct = 12.0 * ((at_k_plus_q.coeff(1, j1) * at_kp_minus_q.coeff(1, j2)) *
                                  (at_k.coeff(1, j3) * at_kp.coeff(1, j4)));
    const double sat_a = at_k_plus_q.coeff(2, j1) * at_kp_minus_q.coeff(1, j2) *
                         at_k.coeff(1, j3) * at_kp.coeff(1, j4);
    const double sat_b = at_kp.coeff(2, j4) * at_k.coeff(1, j3) *
                         at_kp_minus_q.coeff(1, j2) * at_k_plus_q.coeff(1, j1);
    return eb * (direct - (8.0 * pi / 7.0) * saturation * (sat_a + sat_b));
}

// Potential for the scattering (k, j3) + (k', j4) -> (k+q, j1) + (k'-q, j2)
// with the physical saturation ratio.
inline double effective_potential(const CavityParams& p, const WaveVector& k,
                                  const WaveVector& k_prime, const WaveVector& q,
                                  int j1, int j2, int j3, int j4) {
    p.validate();
    return effective_potential_from_coeffs(
        p.eb, p.saturation_ratio(), hopfield(p, k + q), hopfield(p, k_prime - q),
        hopfield(p, k), hopfield(p, k_prime), j1, j2, j3, j4);
}

// Normalized pair amplitudes (alpha, beta) of the two-branch superposition
// produced when two pump polaritons at kp scatter to kp+q and kp-q:
//
//   alpha = V1222 / sqrt(V1222^2 + V2122^2),  beta likewise from V2122.
//
// Signs are kept: beta < 0 is meaningful downstream.
inline std::pair<double, double> normalized_pair(double v1222, double v2122) {
    const double norm = std::hypot(v1222, v2122);
    if (norm == 0.0)
        throw degenerate_material("both pair potentials vanish; amplitudes undefined");
    return {v1222 / norm, v2122 / norm};
}

inline std::pair<double, double> pair_amplitudes_with_saturation(const CavityParams& p,
                                                                 const WaveVector& kp,
                                                                 const WaveVector& q,
                                                                 double saturation) {
    p.validate();
    const HopfieldCoeffs at_plus = hopfield(p, kp + q);
    const HopfieldCoeffs at_minus = hopfield(p, kp - q);
    const HopfieldCoeffs at_kp = hopfield(p, kp);
    const double v1222 = effective_potential_from_coeffs(p.eb, saturation, at_plus, at_minus,
                                                         at_kp, at_kp, 1, 2, 2, 2);
    const double v2122 = effective_potential_from_coeffs(p.eb, saturation, at_plus, at_minus,
                                                         at_kp, at_kp, 2, 1, 2, 2);
    return normalized_pair(v1222, v2122);
}

inline std::pair<double, double> pair_amplitudes(const CavityParams& p, const WaveVector& kp,
                                                 const WaveVector& q) {
    return pair_amplitudes_with_saturation(p, kp, q, p.saturation_ratio());
}

// Mean-field coupling of the pump mode (kp, branch 2) to the mode (q, j):
// symmetrized combination of the four momentum-conserving potentials with
// zero transfer.
inline double mean_field_coupling(const CavityParams& p, const WaveVector& q,
                                  const WaveVector& kp, int j) {
    p.validate();
    detail::require_branch(j);
    const WaveVector zero{0.0, 0.0};
    const double a = effective_potential(p, q, kp, zero, j, 2, j, 2);
    const double b = effective_potential(p, kp, q, zero, 2, j, 2, j);
    const double c = effective_potential(p, q, kp, kp - q, 2, j, j, 2);
    const double d = effective_potential(p, kp, q, q - kp, j, 2, 2, j);
    return 0.5 * (a + b + c + d);
}

// Energy shift of mode (q, j) for pump occupation |P|^2.
inline double mean_field_shift(const CavityParams& p, const WaveVector& q, const WaveVector& kp,
                               int j, double pump_occupation) {
    if (pump_occupation < 0.0) throw invalid_params("pump occupation must be non-negative");
    return mean_field_coupling(p, q, kp, j) * pump_occupation;
}

} // namespace entlight
