#include "freshcon/ironing.hpp"

#include <cmath>
#include <stdexcept>

#include "freshcon/scalar_opt.hpp"

namespace freshcon::solver {

namespace {

constexpr int kConcavityGrid = 33;

bool looks_concave(const ConcaveObjective& obj) {
    if (!(obj.f_hi > obj.f_lo))
        return true; // degenerate interval, nothing to check
    std::vector<double> v(kConcavityGrid);
    const double h = (obj.f_hi - obj.f_lo) / (kConcavityGrid - 1);
    double scale = 0.0;
    for (int i = 0; i < kConcavityGrid; ++i) {
        v[static_cast<std::size_t>(i)] = obj.value(obj.f_lo + h * i);
        scale = std::max(scale, std::fabs(v[static_cast<std::size_t>(i)]));
    }
    const double tol = 1e-7 * (1.0 + scale);
    for (int i = 1; i + 1 < kConcavityGrid; ++i) {
        const double second = v[static_cast<std::size_t>(i + 1)] -
                              2.0 * v[static_cast<std::size_t>(i)] +
                              v[static_cast<std::size_t>(i - 1)];
        if (second > tol)
            return false;
    }
    return true;
}

struct Block {
    std::size_t lo, hi; // inclusive index range of pooled types
    double f;
};

// Best common frequency for a pooled block: maximizes the sum of the block's
// objectives. Ties resolve to the larger f (smaller cycle, fresher data).
double solve_block(const std::vector<ConcaveObjective>& objectives, std::size_t lo,
                   std::size_t hi) {
    const double f_lo = objectives[lo].f_lo;
    const double f_hi = objectives[lo].f_hi;
    auto value = [&](double f) {
        double s = 0.0;
        for (std::size_t i = lo; i <= hi; ++i)
            s += objectives[i].value(f);
        return s;
    };
    bool have_deriv = true;
    for (std::size_t i = lo; i <= hi; ++i)
        if (!objectives[i].deriv)
            have_deriv = false;
    std::function<double(double)> deriv;
    if (have_deriv) {
        deriv = [&objectives, lo, hi](double f) {
            double s = 0.0;
            for (std::size_t i = lo; i <= hi; ++i)
                s += objectives[i].deriv(f);
            return s;
        };
    }
    return opt::maximize_concave(value, deriv, f_lo, f_hi, 1e-9, 200,
                                 /*prefer_low=*/false)
        .x;
}

} // namespace

std::vector<double> isotonic_projection(const std::vector<double>& values) {
    std::vector<Block> blocks;
    std::vector<double> weights; // pooled counts, parallel to blocks
    blocks.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        blocks.push_back({i, i, values[i]});
        weights.push_back(1.0);
        while (blocks.size() > 1 &&
               blocks[blocks.size() - 2].f > blocks.back().f) {
            const Block top = blocks.back();
            const double wt = weights.back();
            blocks.pop_back();
            weights.pop_back();
            Block& prev = blocks.back();
            const double wp = weights.back();
            prev.f = (prev.f * wp + top.f * wt) / (wp + wt);
            prev.hi = top.hi;
            weights.back() = wp + wt;
        }
    }
    std::vector<double> out(values.size());
    for (const Block& b : blocks)
        for (std::size_t i = b.lo; i <= b.hi; ++i)
            out[i] = b.f;
    return out;
}

std::vector<double> iron_monotone(const std::vector<double>& candidates,
                                  const std::vector<ConcaveObjective>& objectives,
                                  IronReport* report) {
    if (candidates.size() != objectives.size())
        throw std::invalid_argument("iron_monotone: candidates and objectives differ in length");
    IronReport local;
    IronReport& rep = report ? *report : local;
    rep = IronReport{};

    bool monotone = true;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i] < candidates[i - 1])
            monotone = false;
    if (monotone)
        return candidates;
    rep.changed = true;

    for (const ConcaveObjective& obj : objectives) {
        if (!looks_concave(obj)) {
            rep.projection_fallback = true;
            return isotonic_projection(candidates);
        }
    }

    std::vector<Block> blocks;
    blocks.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        blocks.push_back({i, i, candidates[i]});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].f > blocks.back().f) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            prev.hi = top.hi;
            prev.f = solve_block(objectives, prev.lo, prev.hi);
            ++rep.merges;
        }
    }

    std::vector<double> out(candidates.size());
    for (const Block& b : blocks)
        for (std::size_t i = b.lo; i <= b.hi; ++i)
            out[i] = b.f;
    return out;
}

} // namespace freshcon::solver
