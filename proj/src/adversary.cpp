#include "robstaff/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "robstaff/error.hpp"
#include "robstaff/programs.hpp"

namespace robstaff {

PredictionSequence single_switch_sequence(const Instance& inst, int k) {
    if (k < 1 || k > inst.horizon) throw Error(ErrorCode::kInvalidInput, "switch day outside [1, T]");
    const double anchor = overstaffing_bound(inst, k);
    std::vector<PredictionInterval> out;
    for (int t = 1; t <= inst.horizon; ++t) {
        if (t <= k)
            out.push_back({inst.hi0 - inst.eps(t) - inst.delta(t), inst.hi0 - inst.eps(t)});
        else
            out.push_back({anchor, anchor + inst.delta(t)});
    }
    return make_sequence(inst, std::move(out));
}

PredictionSequence worst_case_sequence(const Instance& inst) {
    std::vector<PredictionInterval> out;
    for (int t = 1; t <= inst.horizon; ++t) out.push_back({inst.hi0 - inst.delta(t), inst.hi0});
    return make_sequence(inst, std::move(out));
}

PredictionSequence configuration_sequence(const ReleaseInstance& ri, const std::vector<int>& J) {
    const auto sub = release_subproblem(ri, release_fresh_state(ri));
    if (static_cast<int>(J.size()) != sub.n_epochs())
        throw Error(ErrorCode::kDimensionMismatch, "configuration needs one switch day per epoch");
    for (int l = 0; l < sub.n_epochs(); ++l)
        if (J[l] < sub.epoch_start(l) || J[l] > sub.breaks[l])
            throw Error(ErrorCode::kInvalidInput, "switch day outside its epoch");
    return make_sequence(ri.base, configuration_intervals(sub, J));
}

PredictionSequence random_nested_sequence(const Instance& inst, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double lo = inst.lo0, hi = inst.hi0;
    std::vector<PredictionInterval> out;
    for (int t = 1; t <= inst.horizon; ++t) {
        const double cap = std::min(inst.delta(t), hi - lo);
        // exact-length intervals are the adversarial ones, so draw them half the time
        const double w = unit(rng) < 0.5 ? cap : cap * unit(rng);
        const double a = lo + unit(rng) * (hi - lo - w);
        lo = std::clamp(a, lo, hi);
        hi = std::min(hi, lo + w);
        out.push_back({lo, hi});
    }
    return PredictionSequence(std::move(out), inst.lo0, inst.hi0);
}

DemandCost worst_demand(const Instance& inst, const StaffingPlan& plan, const PredictionSequence& seq) {
    const int T = seq.horizon();
    const double lo = seq.effective_lo(T), hi = seq.effective_hi(T);
    const double a = staffing_cost(inst, plan, lo), b = staffing_cost(inst, plan, hi);
    return a >= b ? DemandCost{a, lo} : DemandCost{b, hi};
}

namespace {

constexpr double kTie = 1e-12;

std::vector<double> grid_points(double origin, double step, double lo, double hi) {
    std::vector<double> out;
    const double k0 = std::ceil((lo - origin) / step - 1e-9);
    const double k1 = std::floor((hi - origin) / step + 1e-9);
    for (double k = k0; k <= k1; k += 1.0) out.push_back(std::clamp(origin + k * step, lo, hi));
    return out;
}

void unique_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) <= kTie; }), v.end());
}

class GridSearch {
public:
    GridSearch(const Instance& inst, const GridOptions& opts, const LeafCost& cost)
        : inst_(inst), opts_(opts), cost_(cost) {
        if (!(opts.grid_step > 0.0)) throw Error(ErrorCode::kInvalidInput, "grid step must be positive");
    }

    // children of a parent interval: grid points plus the single-switch endpoints
    std::vector<PredictionInterval> children(int day, double lo, double hi) const {
        const double width = inst_.delta(day);
        auto pts = grid_points(inst_.lo0, opts_.grid_step, lo, hi);
        pts.push_back(lo);
        pts.push_back(hi);
        pts.push_back(std::clamp(hi - width, lo, hi));
        pts.push_back(std::clamp(lo + width, lo, hi));
        unique_sorted(pts);
        std::vector<PredictionInterval> out;
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = a; b < pts.size(); ++b)
                if (pts[b] - pts[a] <= width + kTie) out.push_back({pts[a], pts[b]});
        return out;
    }

    std::vector<double> demands(double lo, double hi) const {
        auto d = grid_points(inst_.lo0, opts_.grid_step, lo, hi);
        d.push_back(lo);
        d.push_back(hi);
        unique_sorted(d);
        return d;
    }

    // node count, stopping early once it passes the cap
    std::size_t count(int day, double lo, double hi, std::size_t cap) const {
        if (day > inst_.horizon) return demands(lo, hi).size();
        std::size_t total = 0;
        for (const auto& c : children(day, lo, hi)) {
            total += 1 + count(day + 1, c.lo, c.hi, cap);
            if (total > cap) break;
        }
        return total;
    }

    void run(int day, double lo, double hi, const Policy& policy, StaffingPlan& plan,
             std::vector<PredictionInterval>& path, WorstCase& best) const {
        if (day > inst_.horizon) {
            for (double d : demands(lo, hi)) {
                ++best.leaves;
                const double c = cost_(plan, d);
                if (c > best.cost + kTie || best.sequence.empty()) {
                    best.cost = c;
                    best.demand = d;
                    best.sequence = path;
                }
            }
            return;
        }
        for (const auto& c : children(day, lo, hi)) expand(day, c, policy, plan, path, best);
    }

    void expand(int day, const PredictionInterval& c, const Policy& policy, StaffingPlan& plan,
                std::vector<PredictionInterval>& path, WorstCase& best) const {
        auto next = policy.clone();
        const DayDecision dec = next->step({day, c, nullptr});
        for (int i = 0; i < plan.n_pools(); ++i) {
            plan.hires[i][day - 1] = dec.hires[i];
            plan.releases[i][day - 1] = dec.releases.empty() ? 0.0 : dec.releases[i];
        }
        path.push_back(c);
        run(day + 1, c.lo, c.hi, *next, plan, path, best);
        path.pop_back();
    }

private:
    const Instance& inst_;
    GridOptions opts_;
    const LeafCost& cost_;
};

void merge(WorstCase& into, WorstCase&& part) {
    into.leaves += part.leaves;
    if (!part.sequence.empty() && (into.sequence.empty() || part.cost > into.cost + kTie)) {
        into.cost = part.cost;
        into.demand = part.demand;
        into.sequence = std::move(part.sequence);
    }
}

}  // namespace

WorstCase brute_force_worst_case(const Instance& inst, const Policy& policy, const GridOptions& opts) {
    const LeafCost cost = [&inst](const StaffingPlan& plan, double d) { return staffing_cost(inst, plan, d); };
    return brute_force_worst_case(inst, policy, opts, cost);
}

WorstCase brute_force_worst_case(const Instance& inst, const Policy& policy, const GridOptions& opts,
                                 const LeafCost& cost) {
    for (double e : inst.inconsistency)
        if (e != 0.0) throw Error(ErrorCode::kParameterOutOfRange, "the grid adversary certifies zero inconsistency only");
    GridSearch search(inst, opts, cost);
    const std::size_t nodes = search.count(1, inst.lo0, inst.hi0, opts.node_cap);
    if (nodes > opts.node_cap)
        throw Error(ErrorCode::kBudgetExceeded, "grid enumeration exceeds " + std::to_string(opts.node_cap) + " nodes");

    auto root = policy.clone();
    root->reset();
    const auto first = search.children(1, inst.lo0, inst.hi0);
    const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(first.size())));

    auto chunk = [&](int w) {
        WorstCase best;
        best.cost = -std::numeric_limits<double>::infinity();
        StaffingPlan plan = StaffingPlan::empty(inst.n_pools, inst.horizon);
        std::vector<PredictionInterval> path;
        for (size_t c = w; c < first.size(); c += workers) search.expand(1, first[c], *root, plan, path, best);
        return best;
    };
    // workers take strided day-one choices; on equal cost the lower worker keeps its witness
    std::vector<std::future<WorstCase>> parts;
    for (int w = 1; w < workers; ++w) parts.push_back(std::async(std::launch::async, chunk, w));
    WorstCase best = chunk(0);
    for (auto& p : parts) merge(best, p.get());
    return best;
}

WorstCase single_switch_worst_case(const Instance& inst, Policy& policy) {
    WorstCase best;
    best.cost = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= inst.horizon; ++k) {
        const auto seq = single_switch_sequence(inst, k);
        const auto plan = run_policy(policy, inst.n_pools, seq);
        const auto dc = worst_demand(inst, plan, seq);
        ++best.leaves;
        if (dc.cost > best.cost) best = {dc.cost, seq.intervals(), dc.demand, best.leaves};
    }
    return best;
}

WorstCase configuration_worst_case(const ReleaseInstance& ri, Policy& policy) {
    const auto sub = release_subproblem(ri, release_fresh_state(ri));
    WorstCase best;
    best.cost = -std::numeric_limits<double>::infinity();
    for (const auto& J : enumerate_configurations(sub, kDefaultConfigurationCap)) {
        const auto seq = configuration_sequence(ri, J);
        const auto plan = run_policy(policy, ri.base.n_pools, seq);
        const auto dc = worst_demand(ri.base, plan, seq);
        ++best.leaves;
        if (dc.cost > best.cost) best = {dc.cost, seq.intervals(), dc.demand, best.leaves};
    }
    return best;
}

MultiWorstCase brute_force_multi_station(const MultiStationInstance& msi, const std::vector<const Policy*>& stations,
                                         const GridOptions& opts) {
    if (static_cast<int>(stations.size()) != msi.n_stations())
        throw Error(ErrorCode::kDimensionMismatch, "one policy per station is required");
    MultiWorstCase out;
    for (int j = 0; j < msi.n_stations(); ++j) {
        const Instance view = msi.station_instance(j);
        out.stations.push_back(brute_force_worst_case(view, *stations[j], opts));
        const double c = out.stations.back().cost;
        out.aggregate = msi.objective == StationObjective::kMax ? std::max(out.aggregate, c) : out.aggregate + c;
    }
    return out;
}

}  // namespace robstaff
