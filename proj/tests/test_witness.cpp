#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <entlight/state.hpp>
#include <entlight/witness.hpp>

using namespace entlight;

namespace {

const CavityParams reference_params{1.5, 0.002, 0.010, 0.0};

std::vector<PairChannel> reference_channels() {
    PumpSpec pumps;
    pumps.magnitudes_k0 = {0.025, 0.05, 0.075};
    return build_pairs(reference_params, pumps);
}

DephasedState wrap_matrix(const ComplexMatrix& rho) {
    return DephasedState{rho.dim(), rho, 0.0, 0.0};
}

// Random positive semidefinite matrix built as B B^dagger.
ComplexMatrix random_psd(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix b(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) b(i, j) = complexd(dist(rng), dist(rng));
    ComplexMatrix a(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            complexd acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += b(i, k) * std::conj(b(j, k));
            a(i, j) = acc;
            a(j, i) = std::conj(acc);
        }
        a(i, i) = a(i, i).real();
    }
    return a;
}

ComplexMatrix random_projector_witness(int n_pairs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.05, 0.45 * pi);
    std::vector<PairChannel> chs(n_pairs);
    for (auto& ch : chs) {
        const double th = angle(rng);
        ch.alpha = std::cos(th);
        ch.beta = std::sin(th);
        ch.e1 = 1.0;
        ch.e2 = 2.0;
    }
    const BipartiteState s = bipartite_state(chs);
    const PropagationMedia media{{0.5}, {1.0}};
    return witness_from_state(dephased_density(s, media, 0.0, 0.0)).gamma;
}

double brute_force_subset_max(const ComplexMatrix& a, int r) {
    const int dim = a.dim();
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        best = std::max(best, largest_eigenvalue(principal_submatrix(a, idx)));
        int pos = r - 1;
        while (pos >= 0 && idx[pos] == dim - r + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
    return best;
}

} // namespace

TEST_CASE("pure-state witness is the rank-one projector onto the state") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};
    const DephasedState d = dephased_density(s, media, 0.0, 0.0);

    const WitnessOperator w = witness_from_state(d);
    REQUIRE(w.rank == 1);
    REQUIRE(w.dim == s.dim());
    for (int m = 0; m < w.dim; ++m)
        for (int l = 0; l < w.dim; ++l)
            CHECK(std::abs(w.gamma(m, l) - complexd(s.gamma[m] * s.gamma[l])) < 1e-12);
    CHECK(witness_expectation(d, w) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("projector property and rank for mixed states") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};
    const DephasedState d = dephased_density(s, media, 0.0, 2000.0);

    const WitnessOperator w = witness_from_state(d);
    CHECK(w.rank >= 1);
    // Gamma^2 == Gamma for a projector.
    const int dim = w.dim;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            complexd acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += w.gamma(i, k) * w.gamma(k, j);
            CHECK(std::abs(acc - w.gamma(i, j)) < 1e-10);
        }
    }
    CHECK(w.gamma.trace().real() == Catch::Approx(static_cast<double>(w.rank)).margin(1e-10));

    // Fully dephased state: the support is the whole diagonal.
    const WitnessOperator diag_w = witness_from_state(full_dephasing_limit(s, media));
    CHECK(diag_w.rank == s.dim());
}

TEST_CASE("subset maxima for a rank-one projector are partial weight sums") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};
    const DephasedState d = dephased_density(s, media, 0.0, 0.0);
    const WitnessOperator w = witness_from_state(d);

    std::vector<double> weights(s.gamma.size());
    std::transform(s.gamma.begin(), s.gamma.end(), weights.begin(),
                   [](double g) { return g * g; });
    std::sort(weights.rbegin(), weights.rend());

    double acc = 0.0;
    for (int r = 1; r <= w.dim; ++r) {
        acc += weights[r - 1];
        for (const auto mode : {SubsetSearch::exhaustive, SubsetSearch::pruned}) {
            CHECK(subset_eigenvalue_bound(w, r, mode) == Catch::Approx(acc).margin(1e-10));
        }
    }

    const SNCertificate cert = certify_sn(d);
    CHECK(cert.certified_sn == pure_state_schmidt_number(s.gamma));
    CHECK(cert.certified_sn == s.dim());
}

TEST_CASE("subset maxima are monotone and exhaust at full dimension") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};
    const WitnessOperator w = witness_from_state(dephased_density(s, media, 0.0, 400.0));

    double prev = -1.0;
    for (int r = 1; r <= w.dim; ++r) {
        const double f = subset_eigenvalue_bound(w, r, SubsetSearch::automatic);
        CHECK(f >= prev - 1e-12);
        prev = f;
    }
    // The full set contains the projector's unit eigenvalue.
    CHECK(subset_eigenvalue_bound(w, w.dim, SubsetSearch::automatic) ==
          Catch::Approx(1.0).margin(1e-10));

    // r = 1 submatrices are scalars: the answer is the largest diagonal.
    double max_diag = 0.0;
    for (int i = 0; i < w.dim; ++i) max_diag = std::max(max_diag, w.gamma(i, i).real());
    CHECK(subset_eigenvalue_bound(w, 1, SubsetSearch::automatic) ==
          Catch::Approx(max_diag).margin(1e-12));
}

TEST_CASE("pruned search agrees with exhaustive enumeration") {
    std::mt19937_64 rng(0x5eedULL);

    // Generic dense positive semidefinite matrices.
    for (int trial = 0; trial < 8; ++trial) {
        const int dim = 4 + static_cast<int>(rng() % 7);
        const ComplexMatrix a = random_psd(dim, rng);
        WitnessOperator w;
        w.dim = dim;
        w.rank = dim;
        w.gamma = a;
        for (int r = 1; r <= dim; ++r) {
            const double expected = brute_force_subset_max(a, r);
            CHECK(subset_eigenvalue_bound(w, r, SubsetSearch::pruned) ==
                  Catch::Approx(expected).margin(1e-10));
            CHECK(subset_eigenvalue_bound(w, r, SubsetSearch::exhaustive) ==
                  Catch::Approx(expected).margin(1e-10));
        }
    }

    // Projector-structured operators as produced by the certification path.
    for (int trial = 0; trial < 4; ++trial) {
        const ComplexMatrix g = random_projector_witness(3, rng);
        WitnessOperator w;
        w.dim = g.dim();
        w.rank = 1;
        w.gamma = g;
        for (int r = 1; r <= w.dim; ++r) {
            const double expected = brute_force_subset_max(g, r);
            CHECK(subset_eigenvalue_bound(w, r, SubsetSearch::pruned) ==
                  Catch::Approx(expected).margin(1e-10));
        }
    }
}

TEST_CASE("certification is sound for partially dephased states") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};

    int prev_sn = s.dim() + 1;
    for (const double dt : {0.0, 10.0, 100.0, 1e4, 1e7}) {
        const DephasedState d = dephased_density(s, media, 0.0, dt);
        const SNCertificate cert = certify_sn(d);

        CHECK(cert.certified_sn >= 1);
        CHECK(cert.certified_sn <= s.dim());
        // Longer windows can only destroy correlations.
        CHECK(cert.certified_sn <= prev_sn);
        prev_sn = cert.certified_sn;

        // Internal consistency of the reported numbers.
        REQUIRE(static_cast<int>(cert.f_values.size()) == s.dim());
        if (cert.certified_sn > 1)
            CHECK(cert.f_values[cert.certified_sn - 2] < cert.expectation - cert.tolerance);
        if (cert.certified_sn < s.dim())
            CHECK(cert.f_values[cert.certified_sn - 1] >= cert.expectation - cert.tolerance);
    }

    const SNCertificate cert = certify_sn(full_dephasing_limit(s, media));
    CHECK(cert.certified_sn == 1);
}

TEST_CASE("channel-local phases do not change subset maxima") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};
    const WitnessOperator w = witness_from_state(dephased_density(s, media, 0.0, 120.0));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    ComplexMatrix rotated(w.dim);
    std::vector<complexd> phases(w.dim);
    for (auto& p : phases) p = std::polar(1.0, angle(rng));
    for (int i = 0; i < w.dim; ++i)
        for (int j = 0; j < w.dim; ++j)
            rotated(i, j) = phases[i] * w.gamma(i, j) * std::conj(phases[j]);

    WitnessOperator rw;
    rw.dim = w.dim;
    rw.rank = w.rank;
    rw.gamma = rotated;
    for (int r = 1; r <= w.dim; ++r)
        CHECK(subset_eigenvalue_bound(rw, r, SubsetSearch::automatic) ==
              Catch::Approx(subset_eigenvalue_bound(w, r, SubsetSearch::automatic))
                  .margin(1e-10));
}

TEST_CASE("witness and certification guards") {
    const BipartiteState s = bipartite_state(reference_channels());
    const PropagationMedia media{{0.5}, {1.0}};
    const DephasedState d = dephased_density(s, media, 0.0, 0.0);
    const WitnessOperator w = witness_from_state(d);

    CHECK_THROWS_AS(witness_from_state(d, 0.0), invalid_params);
    CHECK_THROWS_AS(witness_from_state(d, 1.0), invalid_params);
    CHECK_THROWS_AS(certify_sn(d, 0.0), invalid_params);
    CHECK_THROWS_AS(certify_sn(d, 0.2), invalid_params);
    CHECK_THROWS_AS(subset_eigenvalue_bound(w, 0, SubsetSearch::automatic), invalid_params);
    CHECK_THROWS_AS(subset_eigenvalue_bound(w, w.dim + 1, SubsetSearch::automatic),
                    invalid_params);

    ComplexMatrix mismatched(2);
    mismatched(0, 0) = 1.0;
    CHECK_THROWS_AS(witness_expectation(wrap_matrix(mismatched), w), invalid_params);

    ComplexMatrix zero(4);
    CHECK_THROWS_AS(witness_from_state(wrap_matrix(zero)), null_state);
}

TEST_CASE("pure-state mode counting") {
    CHECK(pure_state_schmidt_number(std::vector<double>{1.0, 0.0, 0.0}) == 1);
    CHECK(pure_state_schmidt_number(std::vector<double>{0.6, -0.8}) == 2);
    CHECK(pure_state_schmidt_number(std::vector<double>{0.6, 1e-5, 0.8}) == 3);
    // Weights at the tolerance boundary do not count.
    CHECK(pure_state_schmidt_number(std::vector<double>{1.0, 1e-7}, 1e-13) == 1);
    CHECK(pure_state_schmidt_number(std::vector<double>{1.0, 1e-6}, 1e-13) == 2);
    CHECK_THROWS_AS(pure_state_schmidt_number(std::vector<double>{1.0}, 0.0), invalid_params);
}
