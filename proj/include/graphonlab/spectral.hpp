#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/poly.hpp"

namespace graphonlab {

struct Eigenpair {
    double value = 0;
    std::vector<double> func;  // step eigenfunction, constant per block
};

// Eigenpairs of the kernel operator of a stepfunction. With weights D and
// block values V, solve the symmetric problem B = D^{1/2} V D^{1/2}; the
// eigenfunctions f = D^{-1/2} y are L2-orthonormal under the weighted inner
// product <f,g> = sum_i p_i f_i g_i. Sorted by |eigenvalue| descending.
inline std::vector<Eigenpair> eigendecompose(const Graphon& w, int top_k) {
    const auto* s = w.steps();
    if (!s) throw std::invalid_argument("eigendecompose requires a step structure");
    const int m = s->size();
    Eigen::MatrixXd b(m, m);
    std::vector<double> sq(m);
    for (int i = 0; i < m; ++i) sq[i] = std::sqrt(s->weights[i]);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) b(i, j) = sq[i] * s->at(i, j) * sq[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int c) {
        return std::abs(solver.eigenvalues()(a)) > std::abs(solver.eigenvalues()(c));
    });

    int take = top_k <= 0 ? m : std::min(top_k, m);
    std::vector<Eigenpair> out(take);
    for (int r = 0; r < take; ++r) {
        int i = idx[r];
        out[r].value = solver.eigenvalues()(i);
        out[r].func.resize(m);
        for (int j = 0; j < m; ++j) out[r].func[j] = solver.eigenvectors()(j, i) / sq[j];
    }
    return out;
}

// Weighted Frobenius distance between the step matrix and its spectral
// reconstruction from the given pairs.
inline double reconstruction_error(const Graphon& w, const std::vector<Eigenpair>& pairs) {
    const auto* s = w.steps();
    const int m = s->size();
    double err2 = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double acc = 0;
            for (const auto& p : pairs) acc += p.value * p.func[i] * p.func[j];
            double d = acc - s->at(i, j);
            err2 += s->weights[i] * s->weights[j] * d * d;
        }
    return std::sqrt(err2);
}

struct SpectralSolveResult {
    Graphon w;                    // solution with step structure
    std::vector<double> original; // eigenvalues mu_i of the input
    std::vector<double> solved;   // z(mu_i), truncated list
    int truncated = 0;            // eigenvalues dropped below the threshold
};

// Solves p(W) = U in the kernel-operator sense for strictly increasing
// polynomials with p(0) = 0: U = sum mu_i f_i f_i yields
// W = sum p^{-1}(mu_i) f_i f_i. Eigenvalues below the truncation threshold
// are dropped.
inline SpectralSolveResult spectral_solve(const Graphon& u, const Poly1& p,
                                          const Config& cfg = Config::defaults()) {
    if (!u.steps()) throw std::invalid_argument("spectral_solve requires a step structure");
    if (!p.strictly_increasing())
        throw std::invalid_argument("spectral_solve needs a strictly increasing odd polynomial with p(0)=0");
    auto pairs = eigendecompose(u, 0);
    const auto* s = u.steps();
    const int m = s->size();

    SpectralSolveResult res;
    StepStructure out;
    out.weights = s->weights;
    out.values.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (const auto& pr : pairs) {
        res.original.push_back(pr.value);
        if (std::abs(pr.value) < cfg.spectral_truncation) {
            ++res.truncated;
            continue;
        }
        double z = p.inverse(pr.value, cfg.root_tol);
        res.solved.push_back(z);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out.values[i * m + j] += z * pr.func[i] * pr.func[j];
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) {
            double v = 0.5 * (out.values[i * m + j] + out.values[j * m + i]);
            out.values[i * m + j] = out.values[j * m + i] = v;
        }
    res.w = Graphon::from_steps(std::move(out), "(specsolve " + u.desc() + ")");
    return res;
}

// p applied to a step kernel as an operator polynomial (weighted matrix
// powers); used to validate spectral_solve by forward application.
inline Graphon apply_operator_poly(const Graphon& w, const Poly1& p) {
    const auto* s = w.steps();
    if (!s) throw std::invalid_argument("apply_operator_poly requires a step structure");
    const int m = s->size();
    StepStructure out;
    out.weights = s->weights;
    out.values.assign(static_cast<std::size_t>(m) * m, 0.0);
    // power1 = W, then repeated weighted products.
    std::vector<double> power(s->values);
    const auto& a = p.coeffs();
    for (std::size_t d = 0; d < a.size(); ++d) {
        if (a[d] != 0.0)
            for (std::size_t i = 0; i < power.size(); ++i) out.values[i] += a[d] * power[i];
        if (d + 1 < a.size()) {
            std::vector<double> next(static_cast<std::size_t>(m) * m, 0.0);
            for (int i = 0; i < m; ++i)
                for (int k = 0; k < m; ++k) {
                    double pik = power[i * m + k] * s->weights[k];
                    if (pik == 0.0) continue;
                    for (int j = 0; j < m; ++j) next[i * m + j] += pik * s->at(k, j);
                }
            power = std::move(next);
        }
    }
    return Graphon::from_steps(std::move(out), "(poly-of " + w.desc() + ")");
}

}  // namespace graphonlab
