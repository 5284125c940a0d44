#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "state.hpp"

namespace entlight {

// Projector onto the numerical range of a density matrix: the span of
// eigenvectors whose eigenvalue exceeds rank_tolerance relative to the
// largest.  Expectation values of this projector bound Schmidt numbers from
// below via the subset spectra computed here.
struct WitnessOperator {
    int dim = 0;
    int rank = 0;
    ComplexMatrix gamma; // Hermitian PSD projector, gamma^2 = gamma
};

inline WitnessOperator witness_from_state(const DephasedState& state,
                                          double rank_tolerance = 1e-10) {
    if (!(rank_tolerance > 0.0) || !(rank_tolerance < 1.0))
        throw invalid_params("rank tolerance must lie in (0, 1)");
    const EigenSystem es = hermitian_eigensystem(state.rho);
    const int dim = state.dim;
    const double lam_max = es.values.back();
    if (!(lam_max > 0.0)) throw null_state("density matrix has no positive eigenvalue");

    WitnessOperator w;
    w.dim = dim;
    w.gamma = ComplexMatrix(dim);
    for (int k = 0; k < dim; ++k) {
        if (!(es.values[k] > rank_tolerance * lam_max)) continue;
        ++w.rank;
        for (int i = 0; i < dim; ++i) {
            const complexd vi = es.vectors(i, k);
            w.gamma(i, i) += complexd(std::norm(vi), 0.0);
            for (int j = i + 1; j < dim; ++j) {
                const complexd t = vi * std::conj(es.vectors(j, k));
                w.gamma(i, j) += t;
                w.gamma(j, i) += std::conj(t);
            }
        }
    }
    if (w.rank == 0) throw null_state("density matrix has no eigenvalue above tolerance");
    return w;
}

inline double witness_expectation(const DephasedState& state, const WitnessOperator& w) {
    if (state.dim != w.dim) throw invalid_params("state and witness dimensions differ");
    double tr = 0.0;
    for (int i = 0; i < w.dim; ++i)
        for (int j = 0; j < w.dim; ++j)
            tr += (state.rho(i, j) * w.gamma(j, i)).real();
    return tr;
}

enum class SubsetSearch {
    exhaustive, // enumerate every r-subset
    pruned,     // best-first branch and bound with admissible bounds
    automatic,  // exhaustive below dim 20, pruned above
};

namespace detail {

inline void extract_submatrix(const ComplexMatrix& h, std::span<const int> idx,
                              ComplexMatrix& out) {
    const int r = static_cast<int>(idx.size());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            out(i, j) = h(idx[i], idx[j]);
}

inline double subset_max_eigenvalue_exhaustive(const ComplexMatrix& h, int r) {
    const int dim = h.dim();
    std::vector<int> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    ComplexMatrix scratch(r);
    EigenWorkspace ws;
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        extract_submatrix(h, idx, scratch);
        best = std::max(best, largest_eigenvalue_inplace(scratch, ws));
        int j = r - 1;
        while (j >= 0 && idx[j] == dim - r + j) --j;
        if (j < 0) break;
        ++idx[j];
        for (int t = j + 1; t < r; ++t) idx[t] = idx[t - 1] + 1;
    }
    return best;
}

// Best-first branch and bound over index subsets, expanded in increasing
// index order so every subset is generated exactly once.  Two admissible
// upper bounds on the largest eigenvalue of any completion of a partial
// subset P (last chosen index `last`, p = |P|):
//
//   trace bound     sum of diag over P + the (r-p) largest diagonals past
//                   `last` (valid for PSD matrices, where lam_max <= trace)
//   Gershgorin      max_i [ diag_i + sum of the (r-1) largest |h_ij| ],
//                   independent of P (valid for any Hermitian matrix)
//
// The queue pops the largest bound first; once it drops to the best exact
// subset eigenvalue found, no better completion can exist.
inline double subset_max_eigenvalue_pruned(const ComplexMatrix& h, int r) {
    const int dim = h.dim();
    std::vector<double> diag(dim);
    for (int i = 0; i < dim; ++i) diag[i] = h(i, i).real();

    // Trace bound is only admissible for PSD input; a negative diagonal
    // entry proves indefiniteness, so fall back to Gershgorin alone.
    const double scale = std::max(1.0, h.max_abs());
    const bool use_trace_bound =
        *std::min_element(diag.begin(), diag.end()) >= -1e-12 * scale;

    // top_suffix[s][t]: sum of the t largest diagonals with index >= s.
    std::vector<std::vector<double>> top_suffix;
    std::vector<double> suffix_max(dim + 1, -std::numeric_limits<double>::infinity());
    const bool has_table = dim <= 256;
    if (use_trace_bound) {
        if (has_table) {
            top_suffix.resize(dim + 1);
            for (int s = dim; s >= 0; --s) {
                std::vector<double> tail(diag.begin() + s, diag.end());
                std::sort(tail.begin(), tail.end(), std::greater<>());
                auto& row = top_suffix[s];
                row.assign(tail.size() + 1, 0.0);
                for (size_t t = 0; t < tail.size(); ++t) row[t + 1] = row[t] + tail[t];
            }
        } else {
            for (int s = dim - 1; s >= 0; --s)
                suffix_max[s] = std::max(suffix_max[s + 1], diag[s]);
        }
    }

    // Gershgorin cap for subsets of size r.
    double gersh = -std::numeric_limits<double>::infinity();
    {
        std::vector<double> row(dim - 1);
        for (int i = 0; i < dim; ++i) {
            int n = 0;
            for (int j = 0; j < dim; ++j)
                if (j != i) row[n++] = std::abs(h(i, j));
            std::sort(row.begin(), row.end(), std::greater<>());
            double s = diag[i];
            for (int t = 0; t < r - 1; ++t) s += row[t];
            gersh = std::max(gersh, s);
        }
    }

    const auto partial_bound = [&](double partial_diag, int last, int p) {
        double b = gersh;
        if (use_trace_bound) {
            const int remaining = r - p;
            double tb = partial_diag;
            if (remaining > 0) {
                if (has_table)
                    tb += top_suffix[last + 1][remaining];
                else
                    tb += remaining * suffix_max[last + 1];
            }
            b = std::min(b, tb);
        }
        return b;
    };

    ComplexMatrix scratch(r);
    EigenWorkspace ws;
    const auto exact = [&](std::span<const int> idx) {
        extract_submatrix(h, idx, scratch);
        return largest_eigenvalue_inplace(scratch, ws);
    };

    // Incumbent: the subset holding the r largest diagonals.
    double best;
    {
        std::vector<int> order(dim);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return diag[a] > diag[b]; });
        std::vector<int> seed(order.begin(), order.begin() + r);
        std::sort(seed.begin(), seed.end());
        best = exact(seed);
    }

    struct Node {
        double bound;
        double partial_diag;
        std::vector<int> idx;
    };
    const auto lower_priority = [](const Node& a, const Node& b) { return a.bound < b.bound; };
    std::priority_queue<Node, std::vector<Node>, decltype(lower_priority)> queue(lower_priority);

    std::vector<int> child;
    const auto emit = [&](const Node* parent, int j) {
        const int p = parent ? static_cast<int>(parent->idx.size()) + 1 : 1;
        const double pd = (parent ? parent->partial_diag : 0.0) + diag[j];
        child.clear();
        if (parent) child = parent->idx;
        child.push_back(j);
        if (p == r) {
            best = std::max(best, exact(child));
            return;
        }
        const double b = partial_bound(pd, j, p);
        if (b > best) queue.push(Node{b, pd, child});
    };

    for (int j = 0; j + r <= dim; ++j) emit(nullptr, j);
    while (!queue.empty()) {
        const Node node = queue.top();
        if (node.bound <= best) break;
        queue.pop();
        const int p = static_cast<int>(node.idx.size());
        const int last = node.idx.back();
        for (int j = last + 1; j + (r - p) <= dim; ++j) emit(&node, j);
    }
    return best;
}

} // namespace detail

// Largest eigenvalue over all r x r principal submatrices of the witness
// projector.  This is the operator bound a Schmidt-number certificate must
// beat at rank r.
inline double subset_eigenvalue_bound(const WitnessOperator& w, int r,
                                      SubsetSearch mode = SubsetSearch::automatic) {
    if (r < 1 || r > w.dim) throw invalid_params("subset size out of range");
    const ComplexMatrix h = detail::hermitized(w.gamma);
    if (r == w.dim) return largest_eigenvalue(h);
    if (mode == SubsetSearch::automatic)
        mode = w.dim < 20 ? SubsetSearch::exhaustive : SubsetSearch::pruned;
    if (mode == SubsetSearch::exhaustive)
        return detail::subset_max_eigenvalue_exhaustive(h, r);
    return detail::subset_max_eigenvalue_pruned(h, r);
}

// Result of a certification run: certified_sn = 1 + the largest r whose
// subset bound stays below the witness expectation by more than the margin.
struct SNCertificate {
    int certified_sn = 1;
    double expectation = 0.0;
    std::vector<double> f_values; // f_values[r-1] = subset bound at rank r
    double tolerance = 0.0;
};

inline SNCertificate certify_sn(const DephasedState& state, double tolerance = 1e-7,
                                double rank_tolerance = 1e-10,
                                SubsetSearch mode = SubsetSearch::automatic) {
    if (!(tolerance > 0.0) || !(tolerance <= 0.1))
        throw invalid_params("certification margin must lie in (0, 0.1]");
    const WitnessOperator w = witness_from_state(state, rank_tolerance);
    SNCertificate cert;
    cert.tolerance = tolerance;
    cert.expectation = witness_expectation(state, w);
    cert.f_values.resize(w.dim);
    for (int r = 1; r <= w.dim; ++r)
        cert.f_values[r - 1] = subset_eigenvalue_bound(w, r, mode);
    for (int r = 1; r <= w.dim; ++r)
        if (cert.f_values[r - 1] < cert.expectation - tolerance)
            cert.certified_sn = r + 1;
    return cert;
}

// Schmidt number of the pure state itself: the number of channel amplitudes
// carrying weight.  Agrees with certify_sn on an undephased state.
inline int pure_state_schmidt_number(std::span<const double> gamma,
                                     double zero_tolerance = 1e-12) {
    if (!(zero_tolerance > 0.0)) throw invalid_params("zero tolerance must be positive");
    int count = 0;
    for (const double g : gamma)
        if (g * g > zero_tolerance) ++count;
    return count;
}

} // namespace entlight
