// Edmonds' maximum-weight matching for general graphs, primal-dual with
// blossom shrinking, O(V^3). Structure follows the classic array-based
// formulation (Galil's survey): vertices 0..n-1, blossoms n..2n-1, endpoints
// p = 2k and 2k+1 of edge k, and dual variables doubled so that integer
// weights keep every intermediate quantity integral.

#include "bdtest/error.hpp"
#include "bdtest/matching.hpp"

#include <algorithm>
#include <cstddef>

namespace bdt::detail {

namespace {

class BlossomSolver {
public:
    BlossomSolver(int n, std::span<const WeightedEdge> edges) : n_(n), edges_(edges.begin(), edges.end())
    {
        const int m = static_cast<int>(edges_.size());
        double maxweight = 0.0;
        for (const auto& e : edges_) maxweight = std::max(maxweight, e.weight);

        endpoint_.resize(static_cast<std::size_t>(2 * m));
        for (int p = 0; p < 2 * m; ++p) {
            const auto& e = edges_[static_cast<std::size_t>(p / 2)];
            endpoint_[at(p)] = static_cast<int>(p % 2 == 0 ? e.u : e.v);
        }
        neighbend_.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < m; ++k) {
            const auto& e = edges_[static_cast<std::size_t>(k)];
            neighbend_[e.u].push_back(2 * k + 1);
            neighbend_[e.v].push_back(2 * k);
        }

        mate_.assign(at(n), -1);
        label_.assign(at(2 * n), 0);
        labelend_.assign(at(2 * n), -1);
        inblossom_.resize(at(n));
        for (int v = 0; v < n; ++v) inblossom_[at(v)] = v;
        blossomparent_.assign(at(2 * n), -1);
        blossomchilds_.assign(at(2 * n), {});
        blossombase_.assign(at(2 * n), -1);
        for (int v = 0; v < n; ++v) blossombase_[at(v)] = v;
        blossomendps_.assign(at(2 * n), {});
        bestedge_.assign(at(2 * n), -1);
        blossombestedges_.assign(at(2 * n), {});
        has_bestedges_.assign(at(2 * n), 0);
        for (int b = 2 * n - 1; b >= n; --b) unused_.push_back(b);
        dualvar_.assign(at(2 * n), 0.0);
        for (int v = 0; v < n; ++v) dualvar_[at(v)] = maxweight;
        allowedge_.assign(at(m), 0);
    }

    std::vector<int> solve()
    {
        if (edges_.empty()) return std::vector<int>(at(n_), -1);

        for (int stage = 0; stage < n_; ++stage) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = n_; b < 2 * n_; ++b) {
                blossombestedges_[at(b)].clear();
                has_bestedges_[at(b)] = 0;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), 0);
            queue_.clear();

            for (int v = 0; v < n_; ++v)
                if (mate_[at(v)] == -1 && label_[at(inblossom_[at(v)])] == 0) assign_label(v, 1, -1);

            bool augmented = false;
            for (;;) {
                while (!queue_.empty() && !augmented) {
                    const int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[at(v)]) {
                        const int k = p / 2;
                        const int w = endpoint_[at(p)];
                        if (inblossom_[at(v)] == inblossom_[at(w)]) continue;
                        double kslack = 0.0;
                        if (!allowedge_[at(k)]) {
                            kslack = slack(k);
                            if (kslack <= 0.0) allowedge_[at(k)] = 1;
                        }
                        if (allowedge_[at(k)]) {
                            if (label_[at(inblossom_[at(w)])] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[at(inblossom_[at(w)])] == 1) {
                                const int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[at(w)] == 0) {
                                label_[at(w)] = 2;
                                labelend_[at(w)] = p ^ 1;
                            }
                        } else if (label_[at(inblossom_[at(w)])] == 1) {
                            const int b = inblossom_[at(v)];
                            if (bestedge_[at(b)] == -1 || kslack < slack(bestedge_[at(b)])) bestedge_[at(b)] = k;
                        } else if (label_[at(w)] == 0) {
                            if (bestedge_[at(w)] == -1 || kslack < slack(bestedge_[at(w)])) bestedge_[at(w)] = k;
                        }
                    }
                }
                if (augmented) break;

                // Dual update. Type 1 (vertex duals hit zero) ends the search.
                int deltatype = 1;
                double delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
                int deltaedge = -1;
                int deltablossom = -1;

                for (int v = 0; v < n_; ++v) {
                    if (label_[at(inblossom_[at(v)])] == 0 && bestedge_[at(v)] != -1) {
                        const double d = slack(bestedge_[at(v)]);
                        if (d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[at(v)];
                        }
                    }
                }
                for (int b = 0; b < 2 * n_; ++b) {
                    if (blossomparent_[at(b)] == -1 && label_[at(b)] == 1 && bestedge_[at(b)] != -1) {
                        const double d = slack(bestedge_[at(b)]) / 2.0;
                        if (d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[at(b)];
                        }
                    }
                }
                for (int b = n_; b < 2 * n_; ++b) {
                    if (blossombase_[at(b)] >= 0 && blossomparent_[at(b)] == -1 && label_[at(b)] == 2 &&
                        dualvar_[at(b)] < delta) {
                        delta = dualvar_[at(b)];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }

                for (int v = 0; v < n_; ++v) {
                    const int lb = label_[at(inblossom_[at(v)])];
                    if (lb == 1)
                        dualvar_[at(v)] -= delta;
                    else if (lb == 2)
                        dualvar_[at(v)] += delta;
                }
                for (int b = n_; b < 2 * n_; ++b) {
                    if (blossombase_[at(b)] >= 0 && blossomparent_[at(b)] == -1) {
                        if (label_[at(b)] == 1)
                            dualvar_[at(b)] += delta;
                        else if (label_[at(b)] == 2)
                            dualvar_[at(b)] -= delta;
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[at(deltaedge)] = 1;
                    int i = static_cast<int>(edges_[at(deltaedge)].u);
                    int j = static_cast<int>(edges_[at(deltaedge)].v);
                    if (label_[at(inblossom_[at(i)])] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[at(deltaedge)] = 1;
                    queue_.push_back(static_cast<int>(edges_[at(deltaedge)].u));
                } else {
                    expand_blossom(deltablossom, false);
                }
            }

            if (!augmented) break;

            for (int b = n_; b < 2 * n_; ++b) {
                if (blossomparent_[at(b)] == -1 && blossombase_[at(b)] >= 0 && label_[at(b)] == 1 &&
                    dualvar_[at(b)] == 0.0)
                    expand_blossom(b, true);
            }
        }

        std::vector<int> result(at(n_), -1);
        for (int v = 0; v < n_; ++v)
            if (mate_[at(v)] >= 0) result[at(v)] = endpoint_[at(mate_[at(v)])];
        return result;
    }

private:
    static std::size_t at(int i) { return static_cast<std::size_t>(i); }

    // Python-style index into a cyclic child list.
    static int& wrap(std::vector<int>& v, int j)
    {
        const int size = static_cast<int>(v.size());
        return v[at(((j % size) + size) % size)];
    }

    double slack(int k) const
    {
        const auto& e = edges_[at(k)];
        return dualvar_[e.u] + dualvar_[e.v] - 2.0 * e.weight;
    }

    void leaves(int b, std::vector<int>& out) const
    {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[at(b)]) leaves(t, out);
    }

    std::vector<int> leaves(int b) const
    {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p)
    {
        const int b = inblossom_[at(w)];
        label_[at(w)] = label_[at(b)] = t;
        labelend_[at(w)] = labelend_[at(b)] = p;
        bestedge_[at(w)] = bestedge_[at(b)] = -1;
        if (t == 1) {
            leaves(b, queue_);
        } else if (t == 2) {
            const int base = blossombase_[at(b)];
            assign_label(endpoint_[at(mate_[at(base)])], 1, mate_[at(base)] ^ 1);
        }
    }

    int scan_blossom(int v, int w)
    {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[at(v)];
            if (label_[at(b)] & 4) {
                base = blossombase_[at(b)];
                break;
            }
            path.push_back(b);
            label_[at(b)] = 5;
            if (labelend_[at(b)] == -1) {
                v = -1;
            } else {
                v = endpoint_[at(labelend_[at(b)])];
                b = inblossom_[at(v)];
                v = endpoint_[at(labelend_[at(b)])];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[at(b)] = 1;
        return base;
    }

    void add_blossom(int base, int k)
    {
        int v = static_cast<int>(edges_[at(k)].u);
        int w = static_cast<int>(edges_[at(k)].v);
        const int bb = inblossom_[at(base)];
        int bv = inblossom_[at(v)];
        int bw = inblossom_[at(w)];
        const int b = unused_.back();
        unused_.pop_back();

        blossombase_[at(b)] = base;
        blossomparent_[at(b)] = -1;
        blossomparent_[at(bb)] = b;
        auto& path = blossomchilds_[at(b)];
        auto& endps = blossomendps_[at(b)];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[at(bv)] = b;
            path.push_back(bv);
            endps.push_back(labelend_[at(bv)]);
            v = endpoint_[at(labelend_[at(bv)])];
            bv = inblossom_[at(v)];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[at(bw)] = b;
            path.push_back(bw);
            endps.push_back(labelend_[at(bw)] ^ 1);
            w = endpoint_[at(labelend_[at(bw)])];
            bw = inblossom_[at(w)];
        }

        label_[at(b)] = 1;
        labelend_[at(b)] = labelend_[at(bb)];
        dualvar_[at(b)] = 0.0;
        for (int leaf : leaves(b)) {
            if (label_[at(inblossom_[at(leaf)])] == 2) queue_.push_back(leaf);
            inblossom_[at(leaf)] = b;
        }

        std::vector<int> bestedgeto(at(2 * n_), -1);
        for (int child : path) {
            std::vector<int> candidates;
            if (!has_bestedges_[at(child)]) {
                for (int leaf : leaves(child))
                    for (int p : neighbend_[at(leaf)]) candidates.push_back(p / 2);
            } else {
                candidates = blossombestedges_[at(child)];
            }
            for (int kk : candidates) {
                int i = static_cast<int>(edges_[at(kk)].u);
                int j = static_cast<int>(edges_[at(kk)].v);
                if (inblossom_[at(j)] == b) std::swap(i, j);
                const int bj = inblossom_[at(j)];
                if (bj != b && label_[at(bj)] == 1 &&
                    (bestedgeto[at(bj)] == -1 || slack(kk) < slack(bestedgeto[at(bj)])))
                    bestedgeto[at(bj)] = kk;
            }
            blossombestedges_[at(child)].clear();
            has_bestedges_[at(child)] = 0;
            bestedge_[at(child)] = -1;
        }
        auto& best = blossombestedges_[at(b)];
        best.clear();
        for (int kk : bestedgeto)
            if (kk != -1) best.push_back(kk);
        has_bestedges_[at(b)] = 1;
        bestedge_[at(b)] = -1;
        for (int kk : best)
            if (bestedge_[at(b)] == -1 || slack(kk) < slack(bestedge_[at(b)])) bestedge_[at(b)] = kk;
    }

    void expand_blossom(int b, bool endstage)
    {
        const std::vector<int> childs = blossomchilds_[at(b)];
        for (int s : childs) {
            blossomparent_[at(s)] = -1;
            if (s < n_) {
                inblossom_[at(s)] = s;
            } else if (endstage && dualvar_[at(s)] == 0.0) {
                expand_blossom(s, endstage);
            } else {
                for (int leaf : leaves(s)) inblossom_[at(leaf)] = s;
            }
        }

        if (!endstage && label_[at(b)] == 2) {
            auto& ch = blossomchilds_[at(b)];
            auto& ep = blossomendps_[at(b)];
            const int entrychild = inblossom_[at(endpoint_[at(labelend_[at(b)] ^ 1)])];
            int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep;
            int endptrick;
            if (j & 1) {
                j -= static_cast<int>(ch.size());
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[at(b)];
            while (j != 0) {
                label_[at(endpoint_[at(p ^ 1)])] = 0;
                label_[at(endpoint_[at(wrap(ep, j - endptrick) ^ endptrick ^ 1)])] = 0;
                assign_label(endpoint_[at(p ^ 1)], 2, p);
                allowedge_[at(wrap(ep, j - endptrick) / 2)] = 1;
                j += jstep;
                p = wrap(ep, j - endptrick) ^ endptrick;
                allowedge_[at(p / 2)] = 1;
                j += jstep;
            }
            int bv = wrap(ch, j);
            label_[at(endpoint_[at(p ^ 1)])] = label_[at(bv)] = 2;
            labelend_[at(endpoint_[at(p ^ 1)])] = labelend_[at(bv)] = p;
            bestedge_[at(bv)] = -1;
            j += jstep;
            while (wrap(ch, j) != entrychild) {
                bv = wrap(ch, j);
                if (label_[at(bv)] == 1) {
                    j += jstep;
                    continue;
                }
                int found = -1;
                for (int leaf : leaves(bv)) {
                    if (label_[at(leaf)] != 0) {
                        found = leaf;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[at(found)] = 0;
                    label_[at(endpoint_[at(mate_[at(blossombase_[at(bv)])])])] = 0;
                    assign_label(found, 2, labelend_[at(found)]);
                }
                j += jstep;
            }
        }

        label_[at(b)] = labelend_[at(b)] = -1;
        blossomchilds_[at(b)].clear();
        blossomendps_[at(b)].clear();
        blossombase_[at(b)] = -1;
        blossombestedges_[at(b)].clear();
        has_bestedges_[at(b)] = 0;
        bestedge_[at(b)] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v)
    {
        int t = v;
        while (blossomparent_[at(t)] != b) t = blossomparent_[at(t)];
        if (t >= n_) augment_blossom(t, v);

        auto& ch = blossomchilds_[at(b)];
        auto& ep = blossomendps_[at(b)];
        const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i;
        int jstep;
        int endptrick;
        if (i & 1) {
            j -= static_cast<int>(ch.size());
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = wrap(ch, j);
            const int p = wrap(ep, j - endptrick) ^ endptrick;
            if (t >= n_) augment_blossom(t, endpoint_[at(p)]);
            j += jstep;
            t = wrap(ch, j);
            if (t >= n_) augment_blossom(t, endpoint_[at(p ^ 1)]);
            mate_[at(endpoint_[at(p)])] = p ^ 1;
            mate_[at(endpoint_[at(p ^ 1)])] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        blossombase_[at(b)] = blossombase_[at(ch.front())];
        require(blossombase_[at(b)] == v, ErrorCode::internal, "blossom augmentation lost its base");
    }

    void augment_matching(int k)
    {
        const int ends[2][2] = {{static_cast<int>(edges_[at(k)].u), 2 * k + 1},
                                {static_cast<int>(edges_[at(k)].v), 2 * k}};
        for (const auto& start : ends) {
            int s = start[0];
            int p = start[1];
            for (;;) {
                const int bs = inblossom_[at(s)];
                if (bs >= n_) augment_blossom(bs, s);
                mate_[at(s)] = p;
                if (labelend_[at(bs)] == -1) break;
                const int t = endpoint_[at(labelend_[at(bs)])];
                const int bt = inblossom_[at(t)];
                s = endpoint_[at(labelend_[at(bt)])];
                const int j = endpoint_[at(labelend_[at(bt)] ^ 1)];
                if (bt >= n_) augment_blossom(bt, j);
                mate_[at(j)] = labelend_[at(bt)];
                p = labelend_[at(bt)] ^ 1;
            }
        }
    }

    int n_;
    std::vector<WeightedEdge> edges_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<char> has_bestedges_;
    std::vector<int> unused_;
    std::vector<double> dualvar_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
};

} // namespace

std::vector<int> blossom_mates(int vertex_count, std::span<const WeightedEdge> edges)
{
    for (const auto& e : edges)
        require(e.weight > 0.0, ErrorCode::argument, "blossom solver expects positive edge weights");
    BlossomSolver solver(vertex_count, edges);
    return solver.solve();
}

} // namespace bdt::detail
