#include "graphon/graph.hpp"

#include <cmath>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

namespace {
constexpr double kSumTol = 1e-12;
constexpr double kRangeTol = 1e-12;  // slack for accumulated rounding
}  // namespace

WeightedGraph WeightedGraph::uniform(Matrix beta, bool symmetric) {
    WeightedGraph g;
    const int n = beta.rows();
    g.alpha.assign(static_cast<std::size_t>(n), 1.0 / n);
    g.beta = std::move(beta);
    g.symmetric = symmetric;
    return g;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "pass";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

ValidationReport validate(const WeightedGraph& g) {
    ValidationReport rep;
    const int n = g.size();
    if (n <= 0) {
        rep.violations.push_back("node count must be positive");
        return rep;
    }
    if (g.beta.rows() != n || g.beta.cols() != n) {
        rep.violations.push_back("beta must be n x n");
        return rep;
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(g.alpha[i] > 0.0) || g.alpha[i] > 1.0 + kRangeTol) {
            std::ostringstream os;
            os << "nodeweight out of (0,1] at index " << i;
            rep.violations.push_back(os.str());
        }
        sum += g.alpha[i];
    }
    if (std::fabs(sum - 1.0) > kSumTol) {
        std::ostringstream os;
        os << "nodeweights sum != 1 (sum=" << sum << ")";
        rep.violations.push_back(os.str());
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double b = g.beta(i, j);
            if (b < -kRangeTol || b > 1.0 + kRangeTol) {
                std::ostringstream os;
                os << "edgeweight out of [0,1] at (" << i << "," << j << ")";
                rep.violations.push_back(os.str());
            }
        }
        if (std::fabs(g.beta(i, i)) > 0.0) {
            std::ostringstream os;
            os << "self-loop weight at node " << i;
            rep.violations.push_back(os.str());
        }
    }
    if (g.symmetric) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (g.beta(i, j) != g.beta(j, i)) {
                    std::ostringstream os;
                    os << "beta not symmetric at (" << i << "," << j << ")";
                    rep.violations.push_back(os.str());
                }
    }
    return rep;
}

ValidationReport validate(const DagGraph& d) {
    ValidationReport rep;
    const int n = d.size();
    if (n <= 0) {
        rep.violations.push_back("node count must be positive");
        return rep;
    }
    if (d.adj.cols() != n) {
        rep.violations.push_back("adj must be n x n");
        return rep;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double a = d.adj(i, j);
            if (a != 0.0 && a != 1.0) {
                std::ostringstream os;
                os << "adjacency entry not 0/1 at (" << i << "," << j << ")";
                rep.violations.push_back(os.str());
            }
            if (i >= j && a != 0.0) {
                std::ostringstream os;
                os << "edge at or below diagonal at (" << i << "," << j << ")";
                rep.violations.push_back(os.str());
            }
        }
    return rep;
}

ValidationReport validate(const Digraphon& d) {
    ValidationReport rep;
    const int n = d.resolution();
    if (n <= 0) {
        rep.violations.push_back("resolution must be positive");
        return rep;
    }
    const Matrix* mats[] = {&d.w00, &d.w01, &d.w10, &d.w11};
    for (const Matrix* m : mats)
        if (m->rows() != n || m->cols() != n) {
            rep.violations.push_back("direction matrices must all be n x n");
            return rep;
        }
    if (static_cast<int>(d.self_loop.size()) != n)
        rep.violations.push_back("self-loop vector length != n");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (const Matrix* m : mats) {
                const double v = (*m)(i, j);
                if (v < -kRangeTol || v > 1.0 + kRangeTol) {
                    std::ostringstream os;
                    os << "direction probability out of [0,1] at (" << i << "," << j << ")";
                    rep.violations.push_back(os.str());
                }
            }
            const double s = d.w00(i, j) + d.w01(i, j) + d.w10(i, j) + d.w11(i, j);
            if (std::fabs(s - 1.0) > kSumTol) {
                std::ostringstream os;
                os << "direction probabilities sum != 1 at (" << i << "," << j << ")";
                rep.violations.push_back(os.str());
            }
        }
    if (!d.w00.is_symmetric()) rep.violations.push_back("w00 not symmetric");
    if (!d.w11.is_symmetric()) rep.violations.push_back("w11 not symmetric");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d.w01(i, j) != d.w10(j, i)) {
                std::ostringstream os;
                os << "w01(i,j) != w10(j,i) at (" << i << "," << j << ")";
                rep.violations.push_back(os.str());
                j = n;  // one report per row is plenty
            }
    for (std::size_t i = 0; i < d.self_loop.size(); ++i)
        if (d.self_loop[i] < 0.0 || d.self_loop[i] > 1.0)
            rep.violations.push_back("self-loop probability out of [0,1]");
    return rep;
}

namespace {
template <typename G>
void require_valid_impl(const G& g, const char* what) {
    const ValidationReport rep = validate(g);
    if (!rep.ok()) throw ValidationError(std::string(what) + ": " + rep.to_string());
}
}  // namespace

void require_valid(const WeightedGraph& g) { require_valid_impl(g, "invalid weighted graph"); }
void require_valid(const DagGraph& d) { require_valid_impl(d, "invalid dag"); }
void require_valid(const Digraphon& d) { require_valid_impl(d, "invalid digraphon"); }

WeightedGraph dag_to_weighted(const DagGraph& d, bool symmetrize) {
    require_valid(d);
    const int n = d.size();
    Matrix beta = d.adj;
    if (symmetrize) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) beta(j, i) = beta(i, j);
    }
    return WeightedGraph::uniform(std::move(beta), symmetrize);
}

StepGraphon to_step(const WeightedGraph& g) {
    const int n = g.size();
    const double u = 1.0 / n;
    for (int i = 0; i < n; ++i)
        if (std::fabs(g.alpha[i] - u) > kSumTol)
            throw InfeasibleError("step graphon conversion requires uniform nodeweights");
    return StepGraphon{g.beta};
}

WeightedGraph to_weighted(const StepGraphon& s) {
    return WeightedGraph::uniform(s.values, s.values.is_symmetric());
}

DagGraph threshold_to_dag(const StepGraphon& s, double thr) {
    const int n = s.resolution();
    Matrix adj(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (s.values(i, j) >= thr) adj(i, j) = 1.0;
    return DagGraph{std::move(adj)};
}

double edge_weight_spread(const WeightedGraph& g) {
    const int n = g.size();
    if (n < 2) return 0.0;
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            lo = std::min(lo, g.beta(i, j));
            hi = std::max(hi, g.beta(i, j));
        }
    return std::max(0.0, hi - lo);
}

}  // namespace graphon
