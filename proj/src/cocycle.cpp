#include "locons/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "locons/errors.hpp"
#include "locons/expr.hpp"

namespace locons {

CechCocycle::CechCocycle(std::vector<int> chart_ids, const std::map<std::pair<int, int>, Entry>& upper,
                         std::vector<Triple> triples)
    : ids_(std::move(chart_ids)), triples_(std::move(triples)) {
    std::sort(ids_.begin(), ids_.end());
    for (int id : ids_) entries_[{id, id}] = Entry{0.0, 0.0, 0};
    for (const auto& [key, e] : upper) {
        const auto [i, j] = key;
        if (!(i < j)) throw ValidationError("cocycle entries must be given with i < j");
        if (!std::binary_search(ids_.begin(), ids_.end(), i) || !std::binary_search(ids_.begin(), ids_.end(), j))
            throw ValidationError("cocycle entry refers to an unknown chart");
        entries_[{i, j}] = e;
        entries_[{j, i}] = Entry{-e.value, e.spread, e.samples};
    }
}

bool CechCocycle::has(int i, int j) const { return entries_.count({i, j}) > 0; }

const CechCocycle::Entry& CechCocycle::entry(int i, int j) const {
    auto it = entries_.find({i, j});
    if (it == entries_.end())
        throw ValidationError("charts " + std::to_string(i) + " and " + std::to_string(j) + " do not overlap");
    return it->second;
}

double CechCocycle::operator()(int i, int j) const { return entry(i, j).value; }

std::vector<std::pair<int, int>> CechCocycle::edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [key, e] : entries_)
        if (key.first < key.second) out.push_back(key);
    return out;
}

bool CechCocycle::identities_hold() const {
    for (const auto& [key, e] : entries_) {
        if (key.first == key.second) {
            if (e.value != 0.0) return false;
        } else if (entry(key.second, key.first).value != -e.value) {
            return false;
        }
    }
    return true;
}

CechCocycle CechCocycle::shifted(const std::map<int, double>& a) const {
    std::map<std::pair<int, int>, Entry> upper;
    for (const auto& [i, j] : edges()) {
        Entry e = entry(i, j);
        e.value += a.at(i) - a.at(j);
        upper[{i, j}] = e;
    }
    return CechCocycle(ids_, upper, triples_);
}

CechCocycle cocycle(const PotentialSet& ps, const Atlas& atlas, int k, double tol) {
    if (k < 1) throw ValidationError("cocycle needs at least one sample per overlap");
    const std::vector<int> ids = atlas.ids();
    std::map<std::pair<int, int>, CechCocycle::Entry> upper;
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            const int pair[2] = {ids[a], ids[b]};
            const auto samples = atlas.overlap_samples(pair, k);
            if (samples.empty()) continue;
            double sum = 0.0, lo = 0.0, hi = 0.0;
            for (std::size_t s = 0; s < samples.size(); ++s) {
                const double d = ps(ids[a], samples[s]) - ps(ids[b], samples[s]);
                sum += d;
                lo = s == 0 ? d : std::min(lo, d);
                hi = s == 0 ? d : std::max(hi, d);
            }
            CechCocycle::Entry e{sum / static_cast<double>(samples.size()), hi - lo,
                                 static_cast<int>(samples.size())};
            if (e.spread > tol)
                throw InvariantError("V_" + std::to_string(ids[a]) + " - V_" + std::to_string(ids[b]) +
                                     " is not constant on the overlap (spread " + expr::format_double(e.spread) +
                                     "); field not closed or charts not contractible");
            upper[{ids[a], ids[b]}] = e;
        }
    }

    std::vector<CechCocycle::Triple> triples;
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            for (std::size_t c = b + 1; c < ids.size(); ++c) {
                const int triple[3] = {ids[a], ids[b], ids[c]};
                if (atlas.overlap_samples(triple, 1).empty()) continue;
                const double cij = upper.at({ids[a], ids[b]}).value;
                const double cjk = upper.at({ids[b], ids[c]}).value;
                const double cik = upper.at({ids[a], ids[c]}).value;
                const double r = std::fabs(cij + cjk - cik);
                if (r > tol)
                    throw InvariantError("triple overlap identity fails on charts " + std::to_string(ids[a]) + "," +
                                         std::to_string(ids[b]) + "," + std::to_string(ids[c]) + " (residual " +
                                         expr::format_double(r) + ")");
                triples.push_back({ids[a], ids[b], ids[c], r});
            }
    return CechCocycle(ids, upper, std::move(triples));
}

double cycle_sum(const CechCocycle& cc, const std::vector<int>& cycle) {
    if (cycle.size() < 2 || cycle.front() != cycle.back())
        throw ValidationError("a cycle must start and end at the same chart");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) s += cc(cycle[i], cycle[i + 1]);
    return s;
}

namespace {

std::vector<int> rotate_to_min(std::vector<int> cycle) {
    cycle.pop_back();
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    cycle.push_back(cycle.front());
    return cycle;
}

}  // namespace

ExactnessResult exactness_test(const CechCocycle& cc, double tol) {
    const auto& ids = cc.chart_ids();
    if (ids.empty()) throw ValidationError("empty cocycle");
    std::map<int, std::vector<int>> adj;
    for (int id : ids) adj[id];
    for (const auto& [i, j] : cc.edges()) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& [id, list] : adj) std::sort(list.begin(), list.end());

    // Components, for the disconnected-nerve report.
    std::map<int, int> component;
    std::vector<std::vector<int>> components;
    for (int start : ids) {
        if (component.count(start)) continue;
        components.emplace_back();
        std::deque<int> queue{start};
        component[start] = static_cast<int>(components.size()) - 1;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            components.back().push_back(u);
            for (int v : adj[u])
                if (!component.count(v)) {
                    component[v] = component[u];
                    queue.push_back(v);
                }
        }
    }
    if (components.size() > 1) {
        std::string msg = "nerve is disconnected; components:";
        for (const auto& comp : components) {
            msg += " {";
            for (std::size_t i = 0; i < comp.size(); ++i) msg += (i ? "," : "") + std::to_string(comp[i]);
            msg += "}";
        }
        throw ValidationError(msg);
    }

    ExactnessResult res;
    std::map<int, int> parent;
    std::set<std::pair<int, int>> tree;
    std::deque<int> queue{ids.front()};
    res.offsets[ids.front()] = 0.0;
    parent[ids.front()] = ids.front();
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (parent.count(v)) continue;
            parent[v] = u;
            res.offsets[v] = res.offsets[u] - cc(u, v);
            tree.insert({std::min(u, v), std::max(u, v)});
            queue.push_back(v);
        }
    }

    auto up_path = [&](int x) {
        std::vector<int> p{x};
        while (parent[x] != x) {
            x = parent[x];
            p.push_back(x);
        }
        return p;
    };

    res.exact = true;
    for (const auto& [u, v] : cc.edges()) {
        if (tree.count({u, v})) continue;
        const auto pu = up_path(u);
        const auto pv = up_path(v);
        const std::set<int> on_u(pu.begin(), pu.end());
        std::vector<int> cycle{u};
        std::size_t lca_in_v = 0;
        while (!on_u.count(pv[lca_in_v])) ++lca_in_v;
        const int lca = pv[lca_in_v];
        cycle.insert(cycle.end(), pv.begin(), pv.begin() + static_cast<std::ptrdiff_t>(lca_in_v) + 1);
        std::vector<int> down;
        for (int x : pu) {
            if (x == lca) break;
            down.push_back(x);
        }
        cycle.insert(cycle.end(), down.rbegin(), down.rend());
        CyclePeriod cp;
        cp.cycle = rotate_to_min(std::move(cycle));
        cp.period = cycle_sum(cc, cp.cycle);
        if (std::fabs(cp.period) >= tol) res.exact = false;
        res.periods.push_back(std::move(cp));
    }
    return res;
}

std::string to_string(FieldClass c) {
    switch (c) {
    case FieldClass::Exact: return "exact";
    case FieldClass::ClosedNotExact: return "closed-not-exact";
    case FieldClass::NotClosed: return "not-closed";
    }
    return "?";
}

std::vector<Rect> default_probe_regions() {
    return {{0.25, -2.0, 2.0, 2.0}, {-2.0, -2.0, -0.25, 2.0}, {-2.0, 0.25, 2.0, 2.0}, {-2.0, -2.0, 2.0, -0.25}};
}

Classification classify(const FieldOneForm& f, const Atlas& atlas, const std::vector<Rect>& regions, int grid,
                        double h, double tol) {
    Classification out;
    bool closed = true;
    for (const Rect& r : regions) {
        out.closedness.push_back(is_closed(f, r, grid, h, tol));
        closed = closed && out.closedness.back().closed;
    }
    if (!closed) {
        out.kind = FieldClass::NotClosed;
        return out;
    }
    const PotentialSet ps = build_potentials(f, atlas);
    out.exactness = exactness_test(cocycle(ps, atlas));
    out.kind = out.exactness->exact ? FieldClass::Exact : FieldClass::ClosedNotExact;
    return out;
}

}  // namespace locons
