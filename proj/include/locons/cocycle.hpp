#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locons/atlas.hpp"
#include "locons/fields.hpp"
#include "locons/potentials.hpp"

namespace locons {

/// Default tolerance for constancy spreads, the triangle identity and
/// cycle periods.
inline constexpr double kCocycleTolerance = 1e-7;

/// Constant differences c_ij = V_i - V_j on the non-empty pairwise overlaps.
/// Stored for both orders with c_ji = -c_ij exactly and c_ii = 0.
class CechCocycle {
public:
    struct Entry {
        double value = 0.0;
        double spread = 0.0;  // max - min of V_i - V_j over the samples
        int samples = 0;
    };
    struct Triple {
        int i, j, k;
        double residual;  // |c_ij + c_jk - c_ik|
    };

    CechCocycle() = default;
    /// Builds from upper-triangle entries (i < j); fills c_ji and c_ii.
    CechCocycle(std::vector<int> chart_ids, const std::map<std::pair<int, int>, Entry>& upper,
                std::vector<Triple> triples = {});

    const std::vector<int>& chart_ids() const noexcept { return ids_; }
    bool has(int i, int j) const;
    double operator()(int i, int j) const;
    const Entry& entry(int i, int j) const;
    /// Overlap edges (i < j) in lexicographic order.
    std::vector<std::pair<int, int>> edges() const;
    const std::vector<Triple>& triples() const noexcept { return triples_; }

    /// Re-checks c_ii = 0 and c_ij = -c_ji exactly.
    bool identities_hold() const;

    CechCocycle shifted(const std::map<int, double>& a) const;

private:
    std::vector<int> ids_;
    std::map<std::pair<int, int>, Entry> entries_;
    std::vector<Triple> triples_;
};

/// Samples every pairwise overlap (k points) and records the mean of
/// V_i - V_j. Throws InvariantError when a spread or a triple-overlap
/// identity residual exceeds tol.
CechCocycle cocycle(const PotentialSet& ps, const Atlas& atlas, int k = 32, double tol = kCocycleTolerance);

struct CyclePeriod {
    std::vector<int> cycle;  // closed chart sequence, first == last
    double period = 0.0;     // sum of c along the cycle
};

struct ExactnessResult {
    bool exact = false;
    /// a_i with c_ij = a_i - a_j on the spanning tree (root offset 0);
    /// gauge-shifting by -a zeroes an exact cocycle.
    std::map<int, double> offsets;
    /// One independent cycle per non-tree overlap edge.
    std::vector<CyclePeriod> periods;
};

/// Solves c = delta(a) on a spanning tree of the nerve; the residuals on the
/// remaining edges are the independent cycle periods. Throws
/// ValidationError when the nerve is disconnected.
ExactnessResult exactness_test(const CechCocycle& cc, double tol = kCocycleTolerance);

/// Sum of c along a closed chart sequence. Throws if an edge has no overlap.
double cycle_sum(const CechCocycle& cc, const std::vector<int>& cycle);

enum class FieldClass { Exact, ClosedNotExact, NotClosed };
std::string to_string(FieldClass c);

struct Classification {
    FieldClass kind = FieldClass::NotClosed;
    std::vector<ClosednessReport> closedness;
    std::optional<ExactnessResult> exactness;
};

/// Regions that ring the origin inside [-2, 2]^2 while staying 0.25 away
/// from it; used when a classification is requested without regions.
std::vector<Rect> default_probe_regions();

/// Closedness on every region, then exactness of the cocycle on the atlas.
Classification classify(const FieldOneForm& f, const Atlas& atlas, const std::vector<Rect>& regions,
                        int grid = 20, double h = 1e-5, double tol = 1e-5);

}  // namespace locons
