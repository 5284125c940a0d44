#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "math.hpp"
#include "phase_matching.hpp"

namespace entlight {

// Dense channel representations become unwieldy past 2^12; refuse rather
// than thrash.
inline constexpr int max_pair_channels = 12;

// N-pair bipartite photon state.  Channel index m runs over 2^N basis
// states; bit n of m (pair 1 in the most significant position) selects which
// branch amplitude pair n contributes: 0 -> alpha_n, 1 -> beta_n.  e1/e2
// hold the product-mode energies per pair for the dephasing model.
struct BipartiteState {
    int n_pairs = 0;
    std::vector<double> gamma;
    std::vector<double> e1;
    std::vector<double> e2;

    int dim() const { return 1 << n_pairs; }
};

inline int pair_bit(int m, int pair, int n_pairs) {
    return (m >> (n_pairs - 1 - pair)) & 1;
}

inline int complement_channel(int m, int n_pairs) {
    return ((1 << n_pairs) - 1) - m;
}

// Channel amplitudes gamma_m = prod_n (bit ? beta_n : alpha_n).  Unit pair
// amplitudes make the vector normalized by construction.
inline std::vector<double> gamma_vector(const std::vector<PairChannel>& channels,
                                        int max_pairs = max_pair_channels) {
    const int n = static_cast<int>(channels.size());
    if (n == 0) throw invalid_params("at least one pair channel is required");
    if (n > max_pairs)
        throw capacity_exceeded("pair count exceeds the dense channel capacity");
    std::vector<double> g(static_cast<size_t>(1) << n);
    for (int m = 0; m < static_cast<int>(g.size()); ++m) {
        double prod = 1.0;
        for (int k = 0; k < n; ++k)
            prod *= pair_bit(m, k, n) ? channels[k].beta : channels[k].alpha;
        g[m] = prod;
    }
    return g;
}

inline BipartiteState bipartite_state(const std::vector<PairChannel>& channels,
                                      int max_pairs = max_pair_channels) {
    BipartiteState s;
    s.gamma = gamma_vector(channels, max_pairs);
    s.n_pairs = static_cast<int>(channels.size());
    s.e1.reserve(channels.size());
    s.e2.reserve(channels.size());
    for (const auto& ch : channels) {
        s.e1.push_back(ch.e1);
        s.e2.push_back(ch.e2);
    }
    return s;
}

// Linear dispersion of a propagation arm: frequency = slope * mode energy.
struct MediumDispersion {
    double slope = 1.0;

    double frequency(double mode_energy) const { return slope * mode_energy; }

    void validate() const {
        if (!(slope > 0.0) || !std::isfinite(slope))
            throw invalid_params("medium dispersion slope must be positive and finite");
    }

    static MediumDispersion vacuum() { return {1.0}; }
};

// The two arms the pair members propagate through.
struct PropagationMedia {
    MediumDispersion minus;
    MediumDispersion plus;

    void validate() const {
        minus.validate();
        plus.validate();
    }
};

// Sum of single-arm frequencies for channel m: bit 0 sends the lower-branch
// energy down this arm, bit 1 the upper-branch energy.
inline double channel_energy(const BipartiteState& s, int m, const MediumDispersion& medium) {
    double sum = 0.0;
    for (int n = 0; n < s.n_pairs; ++n)
        sum += medium.frequency(pair_bit(m, n, s.n_pairs) ? s.e2[n] : s.e1[n]);
    return sum;
}

// Total two-arm channel energy: the minus arm sees channel m, the plus arm
// the complementary assignment.
inline double total_channel_energy(const BipartiteState& s, int m, const PropagationMedia& media) {
    return channel_energy(s, m, media.minus) +
           channel_energy(s, complement_channel(m, s.n_pairs), media.plus);
}

// Free-evolution phase factor of channel m after time t.
inline complexd evolution_phase(const BipartiteState& s, int m, const PropagationMedia& media,
                                double t) {
    const double e = total_channel_energy(s, m, media);
    return std::polar(1.0, -e * t);
}

// Density matrix after averaging the detection time uniformly over
// [t1, t2].
struct DephasedState {
    int dim = 0;
    ComplexMatrix rho;
    double t1 = 0.0;
    double t2 = 0.0;
};

// rho_ml = gamma_m gamma_l exp(-i x (t1+t2)/2) sinc(x (t2-t1)/2) with
// x = eps_m - eps_l.  t2 == t1 is the pure-state limit (sinc(0) = 1);
// t2 < t1 is rejected.
inline DephasedState dephased_density(const BipartiteState& s, const PropagationMedia& media,
                                      double t1, double t2) {
    media.validate();
    if (!std::isfinite(t1) || !std::isfinite(t2))
        throw invalid_window("observation window must be finite");
    if (t2 < t1) throw invalid_window("observation window must have t2 >= t1");
    const int dim = s.dim();
    if (static_cast<int>(s.gamma.size()) != dim)
        throw invalid_params("state amplitude vector has the wrong length");

    std::vector<double> eps(dim);
    for (int m = 0; m < dim; ++m) eps[m] = total_channel_energy(s, m, media);

    const double mid = 0.5 * (t1 + t2);
    const double half_width = 0.5 * (t2 - t1);

    DephasedState out;
    out.dim = dim;
    out.t1 = t1;
    out.t2 = t2;
    out.rho = ComplexMatrix(dim);
    for (int m = 0; m < dim; ++m) {
        out.rho(m, m) = s.gamma[m] * s.gamma[m];
        for (int l = m + 1; l < dim; ++l) {
            const double x = eps[m] - eps[l];
            const complexd v = s.gamma[m] * s.gamma[l] * sinc(x * half_width) *
                               std::polar(1.0, -x * mid);
            out.rho(m, l) = v;
            out.rho(l, m) = std::conj(v);
        }
    }
    return out;
}

// Infinite-window limit: every coherence between channels of distinct total
// energy dies, leaving the diagonal.  (Degenerate channels keep their
// coherence; with generic pump sets there are none.)
inline DephasedState full_dephasing_limit(const BipartiteState& s, const PropagationMedia& media) {
    media.validate();
    const int dim = s.dim();
    if (static_cast<int>(s.gamma.size()) != dim)
        throw invalid_params("state amplitude vector has the wrong length");

    std::vector<double> eps(dim);
    for (int m = 0; m < dim; ++m) eps[m] = total_channel_energy(s, m, media);

    DephasedState out;
    out.dim = dim;
    out.t1 = 0.0;
    out.t2 = std::numeric_limits<double>::infinity();
    out.rho = ComplexMatrix(dim);
    for (int m = 0; m < dim; ++m) {
        out.rho(m, m) = s.gamma[m] * s.gamma[m];
        for (int l = m + 1; l < dim; ++l) {
            if (eps[m] == eps[l]) {
                out.rho(m, l) = s.gamma[m] * s.gamma[l];
                out.rho(l, m) = out.rho(m, l);
            }
        }
    }
    return out;
}

} // namespace entlight
