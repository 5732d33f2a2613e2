#include "graphon/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "graphon/errors.hpp"
#include "graphon/rng.hpp"

namespace graphon {

namespace {

constexpr double kSupportTol = 1e-14;

struct Product {
    WeightedGraph left, right;
    std::vector<std::pair<int, int>> cells;
};

Product build_product(const WeightedGraph& g, const WeightedGraph& h, const Matrix& L) {
    Product prod;
    for (int i = 0; i < L.rows(); ++i)
        for (int p = 0; p < L.cols(); ++p)
            if (L(i, p) > kSupportTol) prod.cells.emplace_back(i, p);
    const int s = static_cast<int>(prod.cells.size());
    prod.left.symmetric = g.symmetric;
    prod.right.symmetric = h.symmetric;
    prod.left.alpha.resize(static_cast<std::size_t>(s));
    prod.right.alpha.resize(static_cast<std::size_t>(s));
    prod.left.beta = Matrix(s, s, 0.0);
    prod.right.beta = Matrix(s, s, 0.0);
    for (int a = 0; a < s; ++a) {
        const auto [i, p] = prod.cells[static_cast<std::size_t>(a)];
        prod.left.alpha[static_cast<std::size_t>(a)] = L(i, p);
        prod.right.alpha[static_cast<std::size_t>(a)] = L(i, p);
        for (int b = 0; b < s; ++b) {
            if (a == b) continue;
            const auto [j, q] = prod.cells[static_cast<std::size_t>(b)];
            prod.left.beta(a, b) = g.beta(i, j);
            prod.right.beta(a, b) = h.beta(p, q);
        }
    }
    return prod;
}

CutResult evaluate_product(const Product& prod, const CutConfig& cfg, std::uint64_t seed) {
    if (prod.left.beta.max_abs_diff(prod.right.beta) == 0.0) {
        CutResult zero;
        zero.value = 0.0;
        zero.exact = true;
        return zero;
    }
    const int s = static_cast<int>(prod.cells.size());
    if (s <= cfg.exact_limit) return cut_distance_exact(prod.left, prod.right, cfg);
    return cut_distance_local_search(prod.left, prod.right, cfg.fallback_restarts, seed, cfg);
}

std::vector<double> cumulative(const std::vector<double>& alpha) {
    std::vector<double> cum(alpha.size() + 1, 0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) cum[i + 1] = cum[i] + alpha[i];
    cum.back() = 1.0;  // pin the top boundary against rounding drift
    return cum;
}

}  // namespace

ValidationReport validate_overlay(const WeightedGraph& g, const WeightedGraph& h,
                                  const OverlayMatrix& overlay, double tol) {
    ValidationReport rep;
    const Matrix& L = overlay.entries;
    if (L.rows() != g.size() || L.cols() != h.size()) {
        rep.violations.push_back("overlay shape must be |V| x |V'|");
        return rep;
    }
    for (int i = 0; i < L.rows(); ++i)
        for (int p = 0; p < L.cols(); ++p)
            if (L(i, p) < -1e-15) {
                std::ostringstream os;
                os << "negative overlay entry at (" << i << "," << p << ")";
                rep.violations.push_back(os.str());
            }
    for (int i = 0; i < L.rows(); ++i) {
        double sum = 0.0;
        for (int p = 0; p < L.cols(); ++p) sum += L(i, p);
        if (std::fabs(sum - g.alpha[i]) > tol) {
            std::ostringstream os;
            os << "row sum != nodeweight at row " << i;
            rep.violations.push_back(os.str());
        }
    }
    for (int p = 0; p < L.cols(); ++p) {
        double sum = 0.0;
        for (int i = 0; i < L.rows(); ++i) sum += L(i, p);
        if (std::fabs(sum - h.alpha[p]) > tol) {
            std::ostringstream os;
            os << "column sum != nodeweight at column " << p;
            rep.violations.push_back(os.str());
        }
    }
    return rep;
}

OverlayMatrix blowup_alignment(int n, int k) {
    Matrix L(n, n * k, 0.0);
    const double w = 1.0 / (static_cast<double>(k) * n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < k; ++p) L(i, i * k + p) = w;
    return OverlayMatrix{std::move(L)};
}

OverlayMatrix interval_overlay(const WeightedGraph& g, const WeightedGraph& h) {
    const std::vector<double> cg = cumulative(g.alpha);
    const std::vector<double> ch = cumulative(h.alpha);
    Matrix L(g.size(), h.size(), 0.0);
    for (int i = 0; i < g.size(); ++i)
        for (int p = 0; p < h.size(); ++p) {
            const double lo = std::max(cg[static_cast<std::size_t>(i)], ch[static_cast<std::size_t>(p)]);
            const double hi = std::min(cg[static_cast<std::size_t>(i) + 1],
                                       ch[static_cast<std::size_t>(p) + 1]);
            if (hi > lo) L(i, p) = hi - lo;
        }
    return OverlayMatrix{std::move(L)};
}

Matrix ipf_fit(Matrix init, const std::vector<double>& row_targets,
               const std::vector<double>& col_targets, int max_sweeps, double tol) {
    const int rows = init.rows(), cols = init.cols();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int i = 0; i < rows; ++i) {
            double sum = 0.0;
            for (int p = 0; p < cols; ++p) sum += init(i, p);
            if (sum <= 0.0) {
                if (row_targets[static_cast<std::size_t>(i)] > tol)
                    throw InfeasibleError("ipf: empty row cannot carry positive marginal");
                continue;
            }
            const double scale = row_targets[static_cast<std::size_t>(i)] / sum;
            for (int p = 0; p < cols; ++p) init(i, p) *= scale;
        }
        double worst = 0.0;
        for (int p = 0; p < cols; ++p) {
            double sum = 0.0;
            for (int i = 0; i < rows; ++i) sum += init(i, p);
            if (sum <= 0.0) {
                if (col_targets[static_cast<std::size_t>(p)] > tol)
                    throw InfeasibleError("ipf: empty column cannot carry positive marginal");
                continue;
            }
            const double scale = col_targets[static_cast<std::size_t>(p)] / sum;
            for (int i = 0; i < rows; ++i) init(i, p) *= scale;
            worst = std::max(worst, std::fabs(sum - col_targets[static_cast<std::size_t>(p)]));
        }
        // after a column pass, row sums tell us how far we still are
        double row_worst = 0.0;
        for (int i = 0; i < rows; ++i) {
            double sum = 0.0;
            for (int p = 0; p < cols; ++p) sum += init(i, p);
            row_worst = std::max(row_worst, std::fabs(sum - row_targets[static_cast<std::size_t>(i)]));
        }
        if (row_worst < tol && worst < tol) return init;
    }
    throw InfeasibleError("ipf: marginals did not converge");
}

OverlayMatrix diag_min_overlay(const WeightedGraph& g, const WeightedGraph& h) {
    if (g.size() != h.size())
        throw InfeasibleError("diag-min overlay requires equal node counts");
    const int n = g.size();
    std::vector<double> res_row(static_cast<std::size_t>(n)), res_col(static_cast<std::size_t>(n));
    Matrix L(n, n, 0.0);
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = std::min(g.alpha[i], h.alpha[i]);
        L(i, i) = d;
        res_row[static_cast<std::size_t>(i)] = g.alpha[i] - d;
        res_col[static_cast<std::size_t>(i)] = h.alpha[i] - d;
        residual += g.alpha[i] - d;
    }
    if (residual > 1e-15) {
        Matrix off(n, n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < n; ++p)
                if (i != p)
                    off(i, p) = res_row[static_cast<std::size_t>(i)] *
                                res_col[static_cast<std::size_t>(p)];
        off = ipf_fit(std::move(off), res_row, res_col);
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < n; ++p) L(i, p) += off(i, p);
    }
    return OverlayMatrix{std::move(L)};
}

OverlayEval overlay_distance(const WeightedGraph& g, const WeightedGraph& h,
                             const OverlayMatrix& overlay, const CutConfig& cfg,
                             std::uint64_t seed) {
    const ValidationReport rep = validate_overlay(g, h, overlay);
    if (!rep.ok()) throw ValidationError("infeasible overlay: " + rep.to_string());
    const Product prod = build_product(g, h, overlay.entries);
    OverlayEval eval;
    eval.support = static_cast<int>(prod.cells.size());
    eval.cut = evaluate_product(prod, cfg, seed);
    return eval;
}

namespace {

/// One subgradient step on the worst cut, then projection back onto the
/// marginal polytope. Returns false when the step cannot be taken.
bool descend_step(const WeightedGraph& g, const WeightedGraph& h, Matrix& L,
                  const Product& prod, const CutResult& cut) {
    const int s = static_cast<int>(prod.cells.size());
    std::vector<char> in_s(static_cast<std::size_t>(s), 0);
    for (int a : cut.subset) in_s[static_cast<std::size_t>(a)] = 1;
    std::vector<int> t;
    std::vector<int> sv;
    for (int a = 0; a < s; ++a) (in_s[static_cast<std::size_t>(a)] ? sv : t).push_back(a);
    const double signed_diff =
        cut_size(sv, t, prod.left) - cut_size(sv, t, prod.right);
    const double sign = signed_diff >= 0.0 ? 1.0 : -1.0;

    Matrix grad(L.rows(), L.cols(), 0.0);
    double grad_sq = 0.0, grad_max = 0.0;
    for (int a = 0; a < s; ++a) {
        const auto [i, p] = prod.cells[static_cast<std::size_t>(a)];
        double acc = 0.0;
        if (in_s[static_cast<std::size_t>(a)]) {
            for (int b : t) {
                const auto [j, q] = prod.cells[static_cast<std::size_t>(b)];
                acc += L(j, q) * (g.beta(i, j) - h.beta(p, q));
            }
        } else {
            for (int b : sv) {
                const auto [j, q] = prod.cells[static_cast<std::size_t>(b)];
                acc += L(j, q) * (g.beta(j, i) - h.beta(q, p));
            }
        }
        const double gval = sign * acc;
        grad(i, p) = gval;
        grad_sq += gval * gval;
        grad_max = std::max(grad_max, std::fabs(gval));
    }
    if (grad_sq <= 1e-24) return false;

    double l_max = 0.0;
    for (double v : L.data()) l_max = std::max(l_max, v);
    double eta = std::fabs(signed_diff) / grad_sq;
    eta = std::min(eta, 0.5 * l_max / (grad_max + 1e-18));
    if (eta <= 0.0) return false;

    for (int i = 0; i < L.rows(); ++i)
        for (int p = 0; p < L.cols(); ++p)
            L(i, p) = std::max(0.0, L(i, p) - eta * grad(i, p));
    return true;
}

}  // namespace

OverlayOptimizeResult optimize_overlay(const WeightedGraph& g, const WeightedGraph& h,
                                       const OverlayOptimizeOptions& options,
                                       const CutConfig& cfg) {
    std::vector<OverlayMatrix> starts;
    starts.push_back(interval_overlay(g, h));
    {
        Matrix prod_l(g.size(), h.size(), 0.0);
        for (int i = 0; i < g.size(); ++i)
            for (int p = 0; p < h.size(); ++p) prod_l(i, p) = g.alpha[i] * h.alpha[p];
        starts.push_back(OverlayMatrix{std::move(prod_l)});
    }
    if (g.size() == h.size()) {
        try {
            starts.push_back(diag_min_overlay(g, h));
        } catch (const InfeasibleError&) {
        }
    }
    for (int r = 0; r < options.random_starts; ++r) {
        Rng rng = make_rng(options.seed, 100 + static_cast<std::uint64_t>(r));
        std::vector<int> perm(static_cast<std::size_t>(g.size()));
        for (int i = 0; i < g.size(); ++i) perm[static_cast<std::size_t>(i)] = i;
        shuffle(perm, rng);
        WeightedGraph shuffled = g;
        for (int i = 0; i < g.size(); ++i)
            shuffled.alpha[static_cast<std::size_t>(i)] = g.alpha[perm[static_cast<std::size_t>(i)]];
        const OverlayMatrix m = interval_overlay(shuffled, h);
        Matrix unshuffled(g.size(), h.size(), 0.0);
        for (int i = 0; i < g.size(); ++i)
            for (int p = 0; p < h.size(); ++p)
                unshuffled(perm[static_cast<std::size_t>(i)], p) = m.entries(i, p);
        starts.push_back(OverlayMatrix{std::move(unshuffled)});
    }

    OverlayOptimizeResult best;
    best.cut.value = std::numeric_limits<double>::infinity();
    std::uint64_t stream = 0;
    for (std::size_t c = 0; c < starts.size(); ++c) {
        Matrix L = starts[c].entries;
        for (int it = 0; it < std::max(1, options.iterations); ++it) {
            const Product prod = build_product(g, h, L);
            const CutResult cut = evaluate_product(prod, cfg, derive_seed(options.seed, stream++));
            if (cut.value < best.cut.value) {
                best.cut = cut;
                best.overlay.entries = L;
                best.support = static_cast<int>(prod.cells.size());
            }
            if (cut.value <= 1e-15) break;
            if (!descend_step(g, h, L, prod, cut)) break;
            try {
                L = ipf_fit(std::move(L), g.alpha, h.alpha, 500, 1e-12);
            } catch (const InfeasibleError&) {
                break;  // projection left the polytope unreachable; keep best so far
            }
        }
    }
    return best;
}

}  // namespace graphon
