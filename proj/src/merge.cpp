#include "surf/merge.hpp"

#include <cassert>
#include <cmath>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace surf {

double SurfConfig::default_epsilon(std::uint64_t n, double delta) {
    return std::sqrt(5.0 * std::log(1.0 / delta) / static_cast<double>(n));
}

double SurfConfig::resolved_epsilon(std::uint64_t n) const {
    return epsilon ? *epsilon : default_epsilon(n, delta);
}

double SurfConfig::gamma(std::uint64_t n) const {
    return alpha * NodeTable::instance().r(degree) * resolved_epsilon(n) *
           std::sqrt(static_cast<double>(degree) + 1.0);
}

void SurfConfig::validate() const {
    if (degree < 0 || degree > NodeTable::kMaxDegree)
        throw std::invalid_argument("degree must be <= 8");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
    if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (halt_t && !is_power_of_two(*halt_t))
        throw std::invalid_argument("halt_t must be a power of two");
}

double lambda_penalty(const EmpiricalDistribution& dist, double gamma) {
    double total = static_cast<double>(dist.total_count());
    double acc = 0.0;
    for (auto c : dist.counts()) acc += std::sqrt(static_cast<double>(c) / total);
    return gamma * acc;
}

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

// INT fits cached per run, keyed by the index pair of the interval.
class FitCache {
public:
    explicit FitCache(const SortedSamples& s, int degree, bool add_one)
        : s_(s), degree_(degree), add_one_(add_one) {}

    const Polynomial& get(index_t a, index_t b) {
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        auto [ins, _] = map_.emplace(key, int_fit(make_interval(a, b, s_), s_, degree_, add_one_));
        return ins->second;
    }

    // read-only lookup usable concurrently
    const Polynomial* find(index_t a, index_t b) const {
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }

    void absorb(std::unordered_map<std::uint64_t, Polynomial>&& other) {
        map_.merge(other);
    }

    const SortedSamples& samples() const { return s_; }
    int degree() const { return degree_; }
    bool add_one() const { return add_one_; }

private:
    const SortedSamples& s_;
    int degree_;
    bool add_one_;
    std::unordered_map<std::uint64_t, Polynomial> map_;
};

// Per-thread overlay: reads fall through to the shared cache, which stays
// immutable while a step's groups run concurrently.
class FitView {
public:
    explicit FitView(const FitCache& shared) : shared_(shared) {}

    const Polynomial& get(index_t a, index_t b) {
        if (const Polynomial* p = shared_.find(a, b)) return *p;
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = local_.find(key);
        if (it != local_.end()) return it->second;
        auto [ins, _] = local_.emplace(
            key, int_fit(make_interval(a, b, shared_.samples()), shared_.samples(),
                         shared_.degree(), shared_.add_one()));
        return ins->second;
    }

    std::unordered_map<std::uint64_t, Polynomial>&& take() { return std::move(local_); }

private:
    const FitCache& shared_;
    std::unordered_map<std::uint64_t, Polynomial> local_;
};

// l1 over [lo, hi] between the fit on (a,b) and fhat; 0 on a degenerate
// interval (the difference has measure zero there, no fit needed).
double lambda_term(FitView& fits, const SortedSamples& s, index_t a, index_t b,
                   const Polynomial& fhat) {
    double lo = s.boundary(a), hi = s.boundary(b);
    if (!(lo < hi)) return 0.0;
    Polynomial diff = fits.get(a, b) - fhat;
    double scale = std::max(fits.get(a, b).max_abs_coeff(), fhat.max_abs_coeff());
    if (diff.max_abs_coeff() < 1e-14 * scale) return 0.0;
    return abs_l1(diff, lo, hi);
}

// cells[first..last) form one dyadic block; value of the mu recursion.
double comp_rec(FitView& fits, const SortedSamples& s, const Polynomial& fhat,
                const std::vector<Interval>& cells, std::size_t first, std::size_t last,
                double gamma) {
    index_t a = cells[first].a, b = cells[last - 1].b;
    double mu = lambda_term(fits, s, a, b, fhat) - gamma;
    if (last - first == 1) return mu;
    index_t mid = a + (b - a) / 2;
    std::size_t split = first;
    while (split < last && cells[split].b != mid) ++split;
    if (split == last) throw std::invalid_argument("comp: non-dyadic split point");
    double left = comp_rec(fits, s, fhat, cells, first, split + 1, gamma * kInvSqrt2);
    double right = comp_rec(fits, s, fhat, cells, split + 1, last, gamma * kInvSqrt2);
    return std::max(mu, left + right);
}

// shared driver; assembles each step's decisions into the next partition
std::vector<Interval> run_merge(const SortedSamples& s, const SurfConfig& cfg,
                                FitCache& fits, int steps) {
    const index_t n = s.n();
    const double gamma0 = cfg.gamma(n);

    std::vector<Interval> cur;
    cur.reserve(n);
    for (index_t k = 0; k < n; ++k) cur.push_back(make_interval(k, k + 1, s));

    for (int i = 1; i <= steps; ++i) {
        const index_t cell = index_t{1} << i;
        const index_t ngroups = n >> i;
        // group g covers slots [g*cell, (g+1)*cell); the held distribution
        // refines this level, so group boundaries land on interval ends
        std::vector<std::size_t> group_start(ngroups + 1);
        {
            std::size_t idx = 0;
            for (index_t g = 0; g < ngroups; ++g) {
                group_start[g] = idx;
                index_t hi = (g + 1) * cell;
                while (idx < cur.size() && cur[idx].b <= hi) ++idx;
                assert(idx > group_start[g] && cur[idx - 1].b == hi);
            }
            group_start[ngroups] = idx;
        }

        std::vector<char> do_merge(ngroups, 0);
#ifdef _OPENMP
        if (cfg.parallel) {
            std::vector<std::unordered_map<std::uint64_t, Polynomial>> gathered(ngroups);
#pragma omp parallel for schedule(dynamic, 4)
            for (std::int64_t g = 0; g < static_cast<std::int64_t>(ngroups); ++g) {
                auto gu = static_cast<std::size_t>(g);
                std::size_t lo = group_start[gu], hi = group_start[gu + 1];
                FitView view(fits);
                if (hi - lo == 1) {
                    do_merge[gu] = 1;  // already a single interval
                } else {
                    index_t ga = static_cast<index_t>(g) * cell, gb = ga + cell;
                    const Polynomial& fhat = view.get(ga, gb);
                    double mu = comp_rec(view, s, fhat, cur, lo, hi, gamma0);
                    do_merge[gu] = (mu <= 0.0) ? 1 : 0;
                }
                gathered[gu] = view.take();
            }
            for (auto& m : gathered) fits.absorb(std::move(m));
        } else
#endif
        {
            for (index_t g = 0; g < ngroups; ++g) {
                std::size_t lo = group_start[g], hi = group_start[g + 1];
                FitView view(fits);
                if (hi - lo == 1) {
                    do_merge[g] = 1;
                } else {
                    index_t ga = g * cell, gb = ga + cell;
                    const Polynomial& fhat = view.get(ga, gb);
                    double mu = comp_rec(view, s, fhat, cur, lo, hi, gamma0);
                    do_merge[g] = (mu <= 0.0) ? 1 : 0;
                }
                fits.absorb(view.take());
            }
        }

        std::vector<Interval> next;
        next.reserve(cur.size());
        for (index_t g = 0; g < ngroups; ++g) {
            if (do_merge[g]) {
                next.push_back(make_interval(g * cell, (g + 1) * cell, s));
            } else {
                for (std::size_t k = group_start[g]; k < group_start[g + 1]; ++k)
                    next.push_back(cur[k]);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

PiecewiseEstimate assemble(const std::vector<Interval>& parts, FitCache& fits,
                           const SortedSamples& s) {
    PiecewiseEstimate est;
    est.hull_lo = s.hull_lo();
    est.hull_hi = s.hull_hi();
    for (const auto& iv : parts) {
        if (iv.degenerate()) continue;  // outermost slots under hull truncation
        est.pieces.push_back(EstimatePiece{iv.lo, iv.hi, fits.get(iv.a, iv.b)});
    }
    est.validate();
    return est;
}

}  // namespace

double comp(const Polynomial& fhat, const std::vector<Interval>& cells,
            const SortedSamples& s, int degree, double gamma, bool add_one) {
    if (cells.empty()) throw std::invalid_argument("comp: no cells");
    for (std::size_t i = 0; i + 1 < cells.size(); ++i)
        if (cells[i].b != cells[i + 1].a)
            throw std::invalid_argument("comp: cells must be contiguous");
    index_t width = cells.back().b - cells.front().a;
    if (!is_power_of_two(width)) throw std::invalid_argument("comp: block width must be dyadic");
    FitCache cache(s, degree, add_one);
    FitView view(cache);
    return comp_rec(view, s, fhat, cells, 0, cells.size(), gamma);
}

double comp(const Polynomial& fhat, const std::vector<Interval>& cells,
            const EmpiricalDistribution& dist, const SortedSamples& s, int degree,
            double gamma, bool add_one) {
    if (dist.size() != cells.size())
        throw std::invalid_argument("comp: one mass per cell required");
    if (!dist.is_binary()) throw std::invalid_argument("comp: distribution must be binary");
    index_t width = cells.empty() ? 0 : cells.back().b - cells.front().a;
    if (dist.total_count() != dist.n() || dist.n() != width)
        throw std::invalid_argument("comp: distribution must be normalized over the block");
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (dist.counts()[i] != cells[i].b - cells[i].a)
            throw std::invalid_argument("comp: masses disagree with cell widths");
    return comp(fhat, cells, s, degree, gamma, add_one);
}

EmpiricalDistribution merge(const SortedSamples& s, const SurfConfig& cfg) {
    cfg.validate();
    FitCache fits(s, cfg.degree, cfg.add_one_mass);
    auto parts = run_merge(s, cfg, fits, s.log2_n());
    std::vector<std::uint64_t> counts;
    counts.reserve(parts.size());
    for (const auto& iv : parts) counts.push_back(iv.b - iv.a);
    return EmpiricalDistribution(std::move(counts), s.n());
}

PiecewiseEstimate surf(const SortedSamples& s, const SurfConfig& cfg) {
    cfg.validate();
    if (cfg.halt_t && *cfg.halt_t > 1) return surf_halted(s, cfg, *cfg.halt_t);
    FitCache fits(s, cfg.degree, cfg.add_one_mass);
    auto parts = run_merge(s, cfg, fits, s.log2_n());
    return assemble(parts, fits, s);
}

PiecewiseEstimate surf_halted(const SortedSamples& s, SurfConfig cfg, std::uint32_t t) {
    cfg.halt_t = t;
    cfg.validate();
    if (t >= s.n()) throw std::invalid_argument("halt_t must be smaller than n");
    int dt = 0;
    while ((std::uint32_t{1} << dt) < t) ++dt;
    FitCache fits(s, cfg.degree, cfg.add_one_mass);
    auto parts = run_merge(s, cfg, fits, s.log2_n() - dt);
    return assemble(parts, fits, s);
}

}  // namespace surf
