#include "graphon/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "graphon/errors.hpp"
#include "graphon/random_models.hpp"
#include "graphon/sampler.hpp"

namespace graphon {

double tau_at_epoch(const GumbelConfig& cfg, int epoch) {
    if (!(cfg.tau0 >= cfg.tau_min) || !(cfg.tau_min > 0.0) || cfg.anneal_rate < 0.0)
        throw ValidationError("gumbel config: need tau0 >= tau_min > 0 and anneal_rate >= 0");
    return std::max(cfg.tau_min, cfg.tau0 * std::exp(-cfg.anneal_rate * epoch));
}

std::vector<std::vector<int>> enumerate_subsets(const DagGraph& start, int v, int K,
                                                std::uint64_t seed) {
    if (K < 1) throw ValidationError("subset enumeration: K must be >= 1");
    if (v < 0 || v >= start.size())
        throw ValidationError("subset enumeration: node out of range");
    std::vector<int> in_set;
    for (int u = 0; u < v; ++u)
        if (start.adj(u, v) != 0.0) in_set.push_back(u);
    std::vector<std::vector<int>> candidates;
    candidates.push_back(in_set);
    for (std::size_t drop = 0; drop < in_set.size(); ++drop) {
        std::vector<int> s;
        for (std::size_t i = 0; i < in_set.size(); ++i)
            if (i != drop) s.push_back(in_set[i]);
        candidates.push_back(std::move(s));
    }
    for (int u = 0; u < v; ++u) {
        if (start.adj(u, v) != 0.0) continue;
        std::vector<int> s = in_set;
        s.insert(std::lower_bound(s.begin(), s.end(), u), u);
        candidates.push_back(std::move(s));
    }
    if (static_cast<int>(candidates.size()) <= K) return candidates;
    // keep the start set; sample K-1 of the others without replacement
    std::vector<int> idx(candidates.size() - 1);
    std::iota(idx.begin(), idx.end(), 1);
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(v));
    shuffle(idx, rng);
    idx.resize(static_cast<std::size_t>(K - 1));
    std::sort(idx.begin(), idx.end());
    std::vector<std::vector<int>> kept;
    kept.push_back(candidates.front());
    for (int i : idx) kept.push_back(candidates[static_cast<std::size_t>(i)]);
    return kept;
}

std::vector<double> gumbel_softmax_with_noise(const std::vector<double>& pi,
                                              const std::vector<double>& gamma, double tau) {
    if (pi.empty() || pi.size() != gamma.size())
        throw ValidationError("gumbel softmax: weight and noise sizes differ");
    if (tau <= 0.0) throw ValidationError("gumbel softmax: tau must be positive");
    std::vector<double> z(pi.size());
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pi.size(); ++k) {
        if (!(pi[k] > 0.0)) throw ValidationError("gumbel softmax: weights must be positive");
        z[k] = (std::log(pi[k]) + gamma[k]) / tau;
        zmax = std::max(zmax, z[k]);
    }
    double denom = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        denom += v;
    }
    for (double& v : z) v /= denom;
    return z;
}

std::vector<double> gumbel_softmax(const std::vector<double>& pi, double tau, Rng& rng) {
    std::vector<double> gamma(pi.size());
    for (double& g : gamma) g = gumbel01(rng);
    return gumbel_softmax_with_noise(pi, gamma, tau);
}

// ---------------------------------------------------------------------------
// StageNet

namespace {

double init_scale(int fan_in) { return 1.0 / std::sqrt(static_cast<double>(std::max(1, fan_in))); }

std::vector<double> softmax_logits(const std::vector<double>& logits) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logits) m = std::max(m, v);
    std::vector<double> p(logits.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        denom += p[i];
    }
    for (double& v : p) v /= denom;
    return p;
}

int argmax_first(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
    return best;
}

}  // namespace

struct StageNet::Workspace {
    int batch = 0;
    std::vector<std::vector<double>> node_in;                        // [v]: batch * D_v
    std::vector<std::vector<std::vector<std::vector<double>>>> pre; // [v][k][member]: batch*width
    std::vector<double> head_pre, head_act;                          // batch * width
    std::vector<double> logits;                                      // batch * classes
};

int StageNet::branch_width(int v, int k) const {
    const auto& subset = subsets_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)];
    if (subset.empty()) return input_dim_;
    return sum_aggregate_ ? width_ : width_ * static_cast<int>(subset.size());
}

void StageNet::build(const std::vector<std::vector<std::vector<int>>>& subsets, int input_dim,
                     int classes, int width, bool sum_aggregate, std::uint64_t seed) {
    n_nodes_ = static_cast<int>(subsets.size());
    input_dim_ = input_dim;
    classes_ = classes;
    width_ = width;
    sum_aggregate_ = sum_aggregate;
    subsets_ = subsets;
    if (n_nodes_ < 1) throw ValidationError("stage net: need at least one node");
    for (int v = 0; v < n_nodes_; ++v) {
        const auto& node = subsets_[static_cast<std::size_t>(v)];
        if (node.empty()) throw ValidationError("stage net: node without subsets");
        for (const auto& s : node)
            for (int u : s)
                if (u < 0 || u >= v)
                    throw ValidationError("stage net: subset member does not precede its node");
    }

    node_dim_.assign(static_cast<std::size_t>(n_nodes_), 0);
    for (int v = 0; v < n_nodes_; ++v) {
        int d = 0;
        for (int k = 0; k < static_cast<int>(subsets_[static_cast<std::size_t>(v)].size()); ++k)
            d = std::max(d, branch_width(v, k));
        node_dim_[static_cast<std::size_t>(v)] = d;
    }

    int off = 0;
    blocks_.resize(static_cast<std::size_t>(n_nodes_));
    for (int v = 0; v < n_nodes_; ++v) {
        const auto& node = subsets_[static_cast<std::size_t>(v)];
        blocks_[static_cast<std::size_t>(v)].resize(node.size());
        for (std::size_t k = 0; k < node.size(); ++k) {
            for (int u : node[k]) {
                MemberBlock blk;
                blk.in_dim = node_dim_[static_cast<std::size_t>(u)];
                blk.source = u;
                blk.weight_off = off;
                off += width_ * blk.in_dim;
                blk.bias_off = off;
                off += width_;
                blocks_[static_cast<std::size_t>(v)][k].push_back(blk);
            }
        }
    }
    head_blocks_.clear();
    for (int u = 0; u < n_nodes_; ++u) {
        MemberBlock blk;
        blk.in_dim = node_dim_[static_cast<std::size_t>(u)];
        blk.source = u;
        blk.weight_off = off;
        off += width_ * blk.in_dim;
        blk.bias_off = off;
        off += width_;
        head_blocks_.push_back(blk);
    }
    cls_weight_off_ = off;
    off += classes_ * n_nodes_ * width_;
    cls_bias_off_ = off;
    off += classes_;
    rho_off_.assign(static_cast<std::size_t>(n_nodes_), 0);
    for (int v = 0; v < n_nodes_; ++v) {
        rho_off_[static_cast<std::size_t>(v)] = off;
        off += static_cast<int>(subsets_[static_cast<std::size_t>(v)].size());
    }
    params_.assign(static_cast<std::size_t>(off), 0.0);

    Rng rng = make_rng(seed, 7);
    for (int v = 0; v < n_nodes_; ++v)
        for (const auto& ks : blocks_[static_cast<std::size_t>(v)])
            for (const MemberBlock& blk : ks) {
                const double s = init_scale(blk.in_dim);
                for (int i = 0; i < width_ * blk.in_dim; ++i)
                    params_[static_cast<std::size_t>(blk.weight_off + i)] = s * normal01(rng);
            }
    for (const MemberBlock& blk : head_blocks_) {
        const double hs = init_scale(blk.in_dim);
        for (int i = 0; i < width_ * blk.in_dim; ++i)
            params_[static_cast<std::size_t>(blk.weight_off + i)] = hs * normal01(rng);
    }
    const double cs = init_scale(n_nodes_ * width_);
    for (int i = 0; i < classes_ * n_nodes_ * width_; ++i)
        params_[static_cast<std::size_t>(cls_weight_off_ + i)] = cs * normal01(rng);
    // structural logits start flat: every subset weight pi = 1
}

StageNet StageNet::searchable(const DagGraph& start, int K, int input_dim, int classes,
                              int width, bool sum_aggregate, std::uint64_t seed) {
    require_valid(start);
    std::vector<std::vector<std::vector<int>>> subsets(static_cast<std::size_t>(start.size()));
    for (int v = 0; v < start.size(); ++v)
        subsets[static_cast<std::size_t>(v)] =
            enumerate_subsets(start, v, K, derive_seed(seed, 17));
    StageNet net;
    net.build(subsets, input_dim, classes, width, sum_aggregate, seed);
    return net;
}

StageNet StageNet::fixed(const DagGraph& arch, int input_dim, int classes, int width,
                         bool sum_aggregate, std::uint64_t seed) {
    require_valid(arch);
    std::vector<std::vector<std::vector<int>>> subsets(static_cast<std::size_t>(arch.size()));
    for (int v = 0; v < arch.size(); ++v) {
        std::vector<int> in_set;
        for (int u = 0; u < v; ++u)
            if (arch.adj(u, v) != 0.0) in_set.push_back(u);
        subsets[static_cast<std::size_t>(v)].push_back(std::move(in_set));
    }
    StageNet net;
    net.build(subsets, input_dim, classes, width, sum_aggregate, seed);
    return net;
}

std::vector<SubsetChoice> StageNet::choices() const {
    std::vector<SubsetChoice> out;
    for (int v = 0; v < n_nodes_; ++v) {
        SubsetChoice c;
        c.node = v;
        c.subsets = subsets_[static_cast<std::size_t>(v)];
        for (std::size_t k = 0; k < c.subsets.size(); ++k)
            c.pi.push_back(std::exp(
                params_[static_cast<std::size_t>(rho_off_[static_cast<std::size_t>(v)]) + k]));
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<double> StageNet::structural_logits(int v) const {
    const auto& node = subsets_[static_cast<std::size_t>(v)];
    std::vector<double> rho(node.size());
    for (std::size_t k = 0; k < node.size(); ++k)
        rho[k] = params_[static_cast<std::size_t>(rho_off_[static_cast<std::size_t>(v)]) + k];
    return rho;
}

void StageNet::forward(const Matrix& x, const std::vector<int>& rows,
                       const std::vector<std::vector<double>>& coeffs, Workspace& ws) const {
    const int batch = static_cast<int>(rows.size());
    ws.batch = batch;
    ws.node_in.assign(static_cast<std::size_t>(n_nodes_), {});
    ws.pre.assign(static_cast<std::size_t>(n_nodes_), {});
    for (int v = 0; v < n_nodes_; ++v) {
        const auto& node = subsets_[static_cast<std::size_t>(v)];
        auto& in_v = ws.node_in[static_cast<std::size_t>(v)];
        const int dv = node_dim_[static_cast<std::size_t>(v)];
        in_v.assign(static_cast<std::size_t>(batch) * dv, 0.0);
        ws.pre[static_cast<std::size_t>(v)].assign(node.size(), {});
        for (std::size_t k = 0; k < node.size(); ++k) {
            const double a = coeffs[static_cast<std::size_t>(v)][k];
            const auto& subset = node[k];
            auto& pre_k = ws.pre[static_cast<std::size_t>(v)][k];
            pre_k.assign(subset.size(), std::vector<double>());
            if (subset.empty()) {
                if (a != 0.0)
                    for (int b = 0; b < batch; ++b)
                        for (int f = 0; f < input_dim_; ++f)
                            in_v[static_cast<std::size_t>(b) * dv + f] +=
                                a * x(rows[static_cast<std::size_t>(b)], f);
                continue;
            }
            for (std::size_t mi = 0; mi < subset.size(); ++mi) {
                const MemberBlock& blk =
                    blocks_[static_cast<std::size_t>(v)][k][mi];
                auto& pre = pre_k[mi];
                pre.assign(static_cast<std::size_t>(batch) * width_, 0.0);
                const auto& in_u = ws.node_in[static_cast<std::size_t>(blk.source)];
                const int du = blk.in_dim;
                const int slice = sum_aggregate_ ? 0 : static_cast<int>(mi) * width_;
                for (int b = 0; b < batch; ++b) {
                    const double* src = in_u.data() + static_cast<std::size_t>(b) * du;
                    for (int w = 0; w < width_; ++w) {
                        const double* wrow =
                            params_.data() + blk.weight_off + static_cast<std::size_t>(w) * du;
                        double acc = params_[static_cast<std::size_t>(blk.bias_off + w)];
                        for (int dIn = 0; dIn < du; ++dIn) acc += wrow[dIn] * src[dIn];
                        pre[static_cast<std::size_t>(b) * width_ + w] = acc;
                        if (a != 0.0) {
                            const double act = linear_ ? acc : std::max(0.0, acc);
                            in_v[static_cast<std::size_t>(b) * dv + slice + w] += a * act;
                        }
                    }
                }
            }
        }
    }
    // output dummy: every node's op applied once more with head-owned
    // parameters, concatenated, then the linear classifier
    const int head_width = n_nodes_ * width_;
    ws.head_pre.assign(static_cast<std::size_t>(batch) * head_width, 0.0);
    ws.head_act.assign(static_cast<std::size_t>(batch) * head_width, 0.0);
    ws.logits.assign(static_cast<std::size_t>(batch) * classes_, 0.0);
    for (int u = 0; u < n_nodes_; ++u) {
        const MemberBlock& blk = head_blocks_[static_cast<std::size_t>(u)];
        const auto& in_u = ws.node_in[static_cast<std::size_t>(u)];
        for (int b = 0; b < batch; ++b) {
            const double* src = in_u.data() + static_cast<std::size_t>(b) * blk.in_dim;
            for (int w = 0; w < width_; ++w) {
                const double* wrow =
                    params_.data() + blk.weight_off + static_cast<std::size_t>(w) * blk.in_dim;
                double acc = params_[static_cast<std::size_t>(blk.bias_off + w)];
                for (int dIn = 0; dIn < blk.in_dim; ++dIn) acc += wrow[dIn] * src[dIn];
                const std::size_t pos =
                    static_cast<std::size_t>(b) * head_width + u * width_ + w;
                ws.head_pre[pos] = acc;
                ws.head_act[pos] = linear_ ? acc : std::max(0.0, acc);
            }
        }
    }
    for (int b = 0; b < batch; ++b)
        for (int c = 0; c < classes_; ++c) {
            const double* crow =
                params_.data() + cls_weight_off_ + static_cast<std::size_t>(c) * head_width;
            double acc = params_[static_cast<std::size_t>(cls_bias_off_ + c)];
            for (int hw = 0; hw < head_width; ++hw)
                acc += crow[hw] * ws.head_act[static_cast<std::size_t>(b) * head_width + hw];
            ws.logits[static_cast<std::size_t>(b) * classes_ + c] = acc;
        }
}

namespace {

double mean_cross_entropy(const std::vector<double>& logits, const std::vector<int>& y,
                          const std::vector<int>& rows, int classes) {
    const int batch = static_cast<int>(rows.size());
    double total = 0.0;
    for (int b = 0; b < batch; ++b) {
        const double* l = logits.data() + static_cast<std::size_t>(b) * classes;
        double m = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < classes; ++c) m = std::max(m, l[c]);
        double denom = 0.0;
        for (int c = 0; c < classes; ++c) denom += std::exp(l[c] - m);
        total += std::log(denom) + m - l[y[static_cast<std::size_t>(rows[static_cast<std::size_t>(b)])]];
    }
    return total / batch;
}

}  // namespace

double StageNet::loss(const Matrix& x, const std::vector<int>& y, const std::vector<int>& rows,
                      const std::vector<std::vector<double>>& gamma, double tau) const {
    Workspace ws;
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n_nodes_));
    for (int v = 0; v < n_nodes_; ++v) {
        std::vector<double> pi;
        for (double r : structural_logits(v)) pi.push_back(std::exp(r));
        coeffs[static_cast<std::size_t>(v)] =
            gumbel_softmax_with_noise(pi, gamma[static_cast<std::size_t>(v)], tau);
    }
    forward(x, rows, coeffs, ws);
    return mean_cross_entropy(ws.logits, y, rows, classes_);
}

double StageNet::loss_and_grad(const Matrix& x, const std::vector<int>& y,
                               const std::vector<int>& rows,
                               const std::vector<std::vector<double>>& gamma, double tau,
                               std::vector<double>& grad) const {
    const int batch = static_cast<int>(rows.size());
    Workspace ws;
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n_nodes_));
    for (int v = 0; v < n_nodes_; ++v) {
        std::vector<double> pi;
        for (double r : structural_logits(v)) pi.push_back(std::exp(r));
        coeffs[static_cast<std::size_t>(v)] =
            gumbel_softmax_with_noise(pi, gamma[static_cast<std::size_t>(v)], tau);
    }
    forward(x, rows, coeffs, ws);
    const double loss_value = mean_cross_entropy(ws.logits, y, rows, classes_);

    grad.assign(params_.size(), 0.0);
    // dL/d(node input), accumulated in reverse topological order
    std::vector<std::vector<double>> g_in(static_cast<std::size_t>(n_nodes_));
    for (int v = 0; v < n_nodes_; ++v)
        g_in[static_cast<std::size_t>(v)].assign(
            static_cast<std::size_t>(batch) * node_dim_[static_cast<std::size_t>(v)], 0.0);

    const int head_width = n_nodes_ * width_;
    std::vector<double> d_head_act(static_cast<std::size_t>(batch) * head_width, 0.0);
    for (int b = 0; b < batch; ++b) {
        const double* l = ws.logits.data() + static_cast<std::size_t>(b) * classes_;
        std::vector<double> p(softmax_logits(std::vector<double>(l, l + classes_)));
        const int target = y[static_cast<std::size_t>(rows[static_cast<std::size_t>(b)])];
        for (int c = 0; c < classes_; ++c) {
            const double dl_c = (p[static_cast<std::size_t>(c)] - (c == target ? 1.0 : 0.0)) / batch;
            grad[static_cast<std::size_t>(cls_bias_off_ + c)] += dl_c;
            double* cw = grad.data() + cls_weight_off_ + static_cast<std::size_t>(c) * head_width;
            const double* crow =
                params_.data() + cls_weight_off_ + static_cast<std::size_t>(c) * head_width;
            for (int hw = 0; hw < head_width; ++hw) {
                cw[hw] += dl_c * ws.head_act[static_cast<std::size_t>(b) * head_width + hw];
                d_head_act[static_cast<std::size_t>(b) * head_width + hw] += dl_c * crow[hw];
            }
        }
    }
    for (int u = 0; u < n_nodes_; ++u) {
        const MemberBlock& blk = head_blocks_[static_cast<std::size_t>(u)];
        const auto& in_u = ws.node_in[static_cast<std::size_t>(u)];
        auto& g_u = g_in[static_cast<std::size_t>(u)];
        for (int b = 0; b < batch; ++b) {
            const double* src = in_u.data() + static_cast<std::size_t>(b) * blk.in_dim;
            double* g_ub = g_u.data() + static_cast<std::size_t>(b) * blk.in_dim;
            for (int w = 0; w < width_; ++w) {
                const std::size_t pos =
                    static_cast<std::size_t>(b) * head_width + u * width_ + w;
                const double gate = linear_ ? 1.0 : (ws.head_pre[pos] > 0.0 ? 1.0 : 0.0);
                const double dpre = d_head_act[pos] * gate;
                if (dpre == 0.0) continue;
                grad[static_cast<std::size_t>(blk.bias_off + w)] += dpre;
                double* ww = grad.data() + blk.weight_off + static_cast<std::size_t>(w) * blk.in_dim;
                const double* wrow =
                    params_.data() + blk.weight_off + static_cast<std::size_t>(w) * blk.in_dim;
                for (int dIn = 0; dIn < blk.in_dim; ++dIn) {
                    ww[dIn] += dpre * src[dIn];
                    g_ub[dIn] += dpre * wrow[dIn];
                }
            }
        }
    }

    for (int v = n_nodes_ - 1; v >= 0; --v) {
        const auto& node = subsets_[static_cast<std::size_t>(v)];
        const int dv = node_dim_[static_cast<std::size_t>(v)];
        const auto& gv = g_in[static_cast<std::size_t>(v)];
        std::vector<double> d_coeff(node.size(), 0.0);
        for (std::size_t k = 0; k < node.size(); ++k) {
            const double a = coeffs[static_cast<std::size_t>(v)][k];
            const auto& subset = node[k];
            if (subset.empty()) {
                // branch value is the raw input x
                for (int b = 0; b < batch; ++b) {
                    const double* gb = gv.data() + static_cast<std::size_t>(b) * dv;
                    double dot = 0.0;
                    for (int f = 0; f < input_dim_; ++f)
                        dot += gb[f] * x(rows[static_cast<std::size_t>(b)], f);
                    d_coeff[k] += dot;
                }
                continue;
            }
            for (std::size_t mi = 0; mi < subset.size(); ++mi) {
                const MemberBlock& blk = blocks_[static_cast<std::size_t>(v)][k][mi];
                const auto& pre = ws.pre[static_cast<std::size_t>(v)][k][mi];
                const auto& in_u = ws.node_in[static_cast<std::size_t>(blk.source)];
                auto& g_u = g_in[static_cast<std::size_t>(blk.source)];
                const int du = blk.in_dim;
                const int slice = sum_aggregate_ ? 0 : static_cast<int>(mi) * width_;
                for (int b = 0; b < batch; ++b) {
                    const double* gb = gv.data() + static_cast<std::size_t>(b) * dv + slice;
                    const double* pre_b = pre.data() + static_cast<std::size_t>(b) * width_;
                    const double* src = in_u.data() + static_cast<std::size_t>(b) * du;
                    double* gu_b = g_u.data() + static_cast<std::size_t>(b) * du;
                    for (int w = 0; w < width_; ++w) {
                        const double act =
                            linear_ ? pre_b[w] : std::max(0.0, pre_b[w]);
                        d_coeff[k] += gb[w] * act;
                        const double gate = linear_ ? 1.0 : (pre_b[w] > 0.0 ? 1.0 : 0.0);
                        const double dpre = a * gb[w] * gate;
                        if (dpre == 0.0) continue;
                        grad[static_cast<std::size_t>(blk.bias_off + w)] += dpre;
                        double* ww = grad.data() + blk.weight_off + static_cast<std::size_t>(w) * du;
                        const double* wrow =
                            params_.data() + blk.weight_off + static_cast<std::size_t>(w) * du;
                        for (int dIn = 0; dIn < du; ++dIn) {
                            ww[dIn] += dpre * src[dIn];
                            gu_b[dIn] += dpre * wrow[dIn];
                        }
                    }
                }
            }
        }
        // structural logits: a = softmax((rho+gamma)/tau), reparameterized
        const auto& a = coeffs[static_cast<std::size_t>(v)];
        double mix = 0.0;
        for (std::size_t k = 0; k < node.size(); ++k) mix += a[k] * d_coeff[k];
        for (std::size_t k = 0; k < node.size(); ++k)
            grad[static_cast<std::size_t>(rho_off_[static_cast<std::size_t>(v)]) + k] +=
                a[k] * (d_coeff[k] - mix) / tau;
    }
    return loss_value;
}

std::vector<double> StageNet::logits_single(const std::vector<double>& x,
                                            const std::vector<std::vector<double>>& coeffs) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw ValidationError("stage net: input dimension mismatch");
    Matrix xm(1, input_dim_, 0.0);
    for (int f = 0; f < input_dim_; ++f) xm(0, f) = x[static_cast<std::size_t>(f)];
    Workspace ws;
    forward(xm, {0}, coeffs, ws);
    return ws.logits;
}

std::vector<std::vector<double>> StageNet::argmax_coeffs() const {
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n_nodes_));
    for (int v = 0; v < n_nodes_; ++v) {
        const std::vector<double> rho = structural_logits(v);
        std::vector<double> a(rho.size(), 0.0);
        a[static_cast<std::size_t>(argmax_first(rho))] = 1.0;
        coeffs[static_cast<std::size_t>(v)] = std::move(a);
    }
    return coeffs;
}

std::vector<double> StageNet::discrete_logits(const std::vector<double>& x) const {
    return logits_single(x, argmax_coeffs());
}

double StageNet::accuracy(const Matrix& x, const std::vector<int>& y) const {
    const int count = x.rows();
    if (count == 0) return 0.0;
    const auto coeffs = argmax_coeffs();
    std::vector<int> rows(static_cast<std::size_t>(count));
    std::iota(rows.begin(), rows.end(), 0);
    Workspace ws;
    forward(x, rows, coeffs, ws);
    int hits = 0;
    for (int b = 0; b < count; ++b) {
        const double* l = ws.logits.data() + static_cast<std::size_t>(b) * classes_;
        hits += argmax_first(std::vector<double>(l, l + classes_)) ==
                        y[static_cast<std::size_t>(b)]
                    ? 1
                    : 0;
    }
    return static_cast<double>(hits) / count;
}

Matrix StageNet::argmax_adjacency() const {
    Matrix adj(n_nodes_, n_nodes_, 0.0);
    for (int v = 0; v < n_nodes_; ++v) {
        const std::vector<double> rho = structural_logits(v);
        const int k = argmax_first(rho);
        for (int u : subsets_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)])
            adj(u, v) = 1.0;
    }
    return adj;
}

// ---------------------------------------------------------------------------
// Planted task

ToyTask make_planted_task(const ToyTaskSpec& spec) {
    if (spec.n_nodes < 3) throw ValidationError("toy task: need at least 3 nodes");
    if (spec.classes < 2) throw ValidationError("toy task: need at least 2 classes");
    if (spec.input_dim < 1 || spec.train_count < spec.classes || spec.val_count < 1)
        throw ValidationError("toy task: degenerate sizes");
    if (spec.noise < 0.0 || spec.noise > 1.0)
        throw ValidationError("toy task: noise must lie in [0,1]");

    ToyTask task;
    task.spec = spec;

    const StepGraphon ws = ws_graphon(WsParams{0.4, 0.75}, spec.n_nodes);
    const WeightedGraph sym = sample_simple(to_weighted(ws), derive_seed(spec.seed, 1));
    Matrix adj(spec.n_nodes, spec.n_nodes, 0.0);
    for (int i = 0; i < spec.n_nodes; ++i)
        for (int j = i + 1; j < spec.n_nodes; ++j) adj(i, j) = sym.beta(i, j);
    task.start = DagGraph{std::move(adj)};

    task.planted = task.start;
    Rng rng_p = make_rng(spec.seed, 2);
    for (int v = 1; v < spec.n_nodes; ++v) {
        std::vector<int> addable;
        for (int u = 0; u < v; ++u)
            if (task.planted.adj(u, v) == 0.0) addable.push_back(u);
        if (addable.empty()) continue;
        task.planted.adj(addable[static_cast<std::size_t>(
                             uniform_below(rng_p, static_cast<int>(addable.size())))],
                         v) = 1.0;
    }

    StageNet teacher = StageNet::fixed(task.planted, spec.input_dim, /*classes=*/1,
                                       /*width=*/8, /*sum_aggregate=*/false,
                                       derive_seed(spec.seed, 3));

    auto fill_inputs = [&](Matrix& x, int count, std::uint64_t stream) {
        x = Matrix(count, spec.input_dim, 0.0);
        Rng rng = make_rng(spec.seed, stream);
        for (int r = 0; r < count; ++r)
            for (int f = 0; f < spec.input_dim; ++f) x(r, f) = normal01(rng);
    };
    fill_inputs(task.train_x, spec.train_count, 4);
    fill_inputs(task.val_x, spec.val_count, 5);

    auto score = [&](const Matrix& x, int row) {
        std::vector<double> in(static_cast<std::size_t>(spec.input_dim));
        for (int f = 0; f < spec.input_dim; ++f) in[static_cast<std::size_t>(f)] = x(row, f);
        return teacher.discrete_logits(in)[0];
    };
    std::vector<double> train_scores(static_cast<std::size_t>(spec.train_count));
    for (int r = 0; r < spec.train_count; ++r) train_scores[static_cast<std::size_t>(r)] = score(task.train_x, r);
    std::vector<double> sorted = train_scores;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (int c = 1; c < spec.classes; ++c)
        cuts.push_back(sorted[static_cast<std::size_t>(
            static_cast<long long>(c) * spec.train_count / spec.classes)]);
    auto bin = [&](double s) {
        int b = 0;
        while (b < static_cast<int>(cuts.size()) && s >= cuts[static_cast<std::size_t>(b)]) ++b;
        return b;
    };

    Rng rng_noise = make_rng(spec.seed, 6);
    task.train_y.resize(static_cast<std::size_t>(spec.train_count));
    for (int r = 0; r < spec.train_count; ++r) {
        int label = bin(train_scores[static_cast<std::size_t>(r)]);
        if (spec.noise > 0.0 && bernoulli(rng_noise, spec.noise))
            label = uniform_below(rng_noise, spec.classes);
        task.train_y[static_cast<std::size_t>(r)] = label;
    }
    task.val_y.resize(static_cast<std::size_t>(spec.val_count));
    for (int r = 0; r < spec.val_count; ++r) {
        int label = bin(score(task.val_x, r));
        if (spec.noise > 0.0 && bernoulli(rng_noise, spec.noise))
            label = uniform_below(rng_noise, spec.classes);
        task.val_y[static_cast<std::size_t>(r)] = label;
    }
    return task;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct TrainOutcome {
    std::vector<EpochStats> history;
    std::vector<Matrix> recorded;
    double final_val_accuracy = 0.0;
};

TrainOutcome run_training(StageNet& net, const ToyTask& task, const SearchConfig& config,
                          bool record_last_phase) {
    if (config.epochs < 1 || config.batch < 1)
        throw ValidationError("search config: epochs and batch must be positive");
    const int train_count = task.train_x.rows();
    std::vector<double> velocity(net.params().size(), 0.0);
    std::vector<double> grad;
    std::vector<int> order(static_cast<std::size_t>(train_count));
    std::iota(order.begin(), order.end(), 0);

    const int drop1 = config.epochs / 2;
    const int drop2 = (3 * config.epochs) / 4;
    TrainOutcome out;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double lr = config.lr;
        if (epoch >= drop1) lr *= 0.1;
        if (epoch >= drop2) lr *= 0.1;
        const double tau = tau_at_epoch(config.gumbel, epoch);

        Rng rng_order = make_rng(config.seed, 1000 + static_cast<std::uint64_t>(epoch));
        shuffle(order, rng_order);

        double epoch_loss = 0.0;
        int steps = 0;
        for (int begin = 0; begin < train_count; begin += config.batch) {
            const int end = std::min(train_count, begin + config.batch);
            std::vector<int> rows(order.begin() + begin, order.begin() + end);
            Rng rng_noise = make_rng(config.seed,
                                     2'000'000 + static_cast<std::uint64_t>(epoch) * 10'000 +
                                         static_cast<std::uint64_t>(steps));
            std::vector<std::vector<double>> gamma(
                static_cast<std::size_t>(net.node_count()));
            for (int v = 0; v < net.node_count(); ++v) {
                auto& gv = gamma[static_cast<std::size_t>(v)];
                gv.resize(net.structural_logits(v).size());
                for (double& g : gv) g = gumbel01(rng_noise);
            }
            const double loss =
                net.loss_and_grad(task.train_x, task.train_y, rows, gamma, tau, grad);
            if (!std::isfinite(loss))
                throw DivergenceError("search training diverged (non-finite loss) at epoch " +
                                      std::to_string(epoch));
            epoch_loss += loss;
            ++steps;
            auto& params = net.params();
            for (std::size_t i = 0; i < params.size(); ++i) {
                velocity[i] = config.momentum * velocity[i] - lr * grad[i];
                params[i] += velocity[i];
            }
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = steps > 0 ? epoch_loss / steps : 0.0;
        stats.val_accuracy = net.accuracy(task.val_x, task.val_y);
        stats.tau = tau;
        out.history.push_back(stats);
        if (record_last_phase && epoch >= drop2) out.recorded.push_back(net.argmax_adjacency());
        out.final_val_accuracy = stats.val_accuracy;
    }
    return out;
}

}  // namespace

SearchResult train_search(const ToyTask& task, const DagGraph& start,
                          const SearchConfig& config) {
    StageNet net = StageNet::searchable(start, config.K, task.spec.input_dim, task.spec.classes,
                                        config.width, config.sum_aggregate, config.seed);
    TrainOutcome out = run_training(net, task, config, /*record_last_phase=*/true);

    SearchResult result;
    result.trace.history = std::move(out.history);
    result.trace.matrices = std::move(out.recorded);
    result.trace.epochs_recorded = static_cast<int>(result.trace.matrices.size());
    result.trace.average = estimate_graphon(result.trace);
    result.final_dag = DagGraph{net.argmax_adjacency()};
    result.final_val_accuracy = out.final_val_accuracy;
    return result;
}

double retrain_fixed(const ToyTask& task, const DagGraph& arch, const SearchConfig& config) {
    StageNet net = StageNet::fixed(arch, task.spec.input_dim, task.spec.classes, config.width,
                                   config.sum_aggregate, config.seed);
    return run_training(net, task, config, /*record_last_phase=*/false).final_val_accuracy;
}

StepGraphon estimate_graphon(const SearchTrace& trace) {
    if (trace.matrices.empty())
        throw ValidationError("graphon estimate: no recorded adjacency matrices");
    const int n = trace.matrices.front().rows();
    Matrix mean(n, n, 0.0);
    for (const Matrix& m : trace.matrices)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mean(i, j) += m(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mean(i, j) /= static_cast<double>(trace.matrices.size());
    return StepGraphon{std::move(mean)};
}

double planted_recovery(const DagGraph& found, const DagGraph& planted) {
    if (found.size() != planted.size())
        throw ValidationError("recovery: node counts differ");
    int hits = 0;
    for (int v = 0; v < found.size(); ++v) {
        bool match = true;
        for (int u = 0; u < v; ++u)
            if (found.adj(u, v) != planted.adj(u, v)) {
                match = false;
                break;
            }
        hits += match ? 1 : 0;
    }
    return static_cast<double>(hits) / found.size();
}

}  // namespace graphon
