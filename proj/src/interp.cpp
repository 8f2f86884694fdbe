#include "surf/interp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace surf {

void NodePartition::validate() const {
    if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != 1.0)
        throw std::invalid_argument("node partition must run from 0 to 1");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i] > nodes[i + 1])
            throw std::invalid_argument("node partition must be nondecreasing");
}

NodeTable::NodeTable() {
    rows_ = {
        {{0.0, 1.0}, 0.0},
        {{0.0, 0.5, 1.0}, 0.0},
        {{0.0, 0.2599, 0.7401, 1.0}, 0.0},
        {{0.0, 0.1548, 0.5, 0.8452, 1.0}, 0.0},
        {{0.0, 0.1015, 0.348, 0.652, 0.8985, 1.0}, 0.0},
        {{0.0, 0.071, 0.254, 0.5, 0.746, 0.929, 1.0}, 0.0},
        {{0.0, 0.053, 0.192, 0.390, 0.610, 0.808, 0.947, 1.0}, 0.0},
        {{0.0, 0.0405, 0.149, 0.310, 0.5, 0.690, 0.851, 0.9595, 1.0}, 0.0},
        {{0.0, 0.032, 0.119, 0.252, 0.414, 0.586, 0.749, 0.881, 0.968, 1.0}, 0.0},
    };
    for (auto& row : rows_) row.ratio = ratio_sup(row);
}

const NodeTable& NodeTable::instance() {
    static const NodeTable table;
    return table;
}

const NodePartition& NodeTable::partition(int degree) const {
    if (degree < 0 || degree > kMaxDegree)
        throw std::invalid_argument("node table covers degrees 0..8");
    return rows_[static_cast<std::size_t>(degree)];
}

namespace {

// partial-pivot elimination on the (d+1)x(d+1) moment system
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t m = b.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14)
            throw degenerate_partition_error("singular moment system: degenerate node partition");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(m);
    for (std::size_t r = m; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < m; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

double cell_moment(double lo, double hi, std::size_t j) {
    // integral of x^j over [lo, hi]
    return (std::pow(hi, static_cast<double>(j + 1)) - std::pow(lo, static_cast<double>(j + 1))) /
           static_cast<double>(j + 1);
}

}  // namespace

Polynomial fit_on_unit(const std::vector<double>& masses, const NodePartition& nodes) {
    nodes.validate();
    const std::size_t m = masses.size();
    if (m != nodes.nodes.size() - 1)
        throw std::invalid_argument("fit_on_unit: need one mass per node cell");
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            a[i][j] = cell_moment(nodes.nodes[i], nodes.nodes[i + 1], j);
    return Polynomial(solve_dense(std::move(a), masses));
}

Polynomial int_fit(const Interval& iv, const SortedSamples& s, const NodePartition& nodes,
                   std::uint64_t n, bool add_one) {
    if (iv.degenerate()) throw std::invalid_argument("int_fit: zero-length interval");
    const double len = iv.hi - iv.lo;
    const std::size_t cells = nodes.nodes.size() - 1;
    std::vector<double> masses(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        double clo = iv.lo + nodes.nodes[i] * len;
        double chi = iv.lo + nodes.nodes[i + 1] * len;
        index_t cnt = (i + 1 == cells) ? s.count_in_closed(clo, chi)
                                       : s.count_in_halfopen(clo, chi);
        masses[i] = (static_cast<double>(cnt) + (add_one ? 1.0 : 0.0)) / static_cast<double>(n);
    }
    return rescale_density(fit_on_unit(masses, nodes), iv.lo, iv.hi);
}

Polynomial int_fit(const Interval& iv, const SortedSamples& s, int degree, bool add_one) {
    return int_fit(iv, s, NodeTable::instance().partition(degree), s.n(), add_one);
}

double ratio(const NodePartition& nodes, const Polynomial& h) {
    nodes.validate();
    if (h.max_abs_coeff() == 0.0)
        throw std::invalid_argument("ratio: zero polynomial (defined as 1 by convention)");
    double denom = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.nodes.size(); ++i)
        denom += std::abs(integrate(h, nodes.nodes[i], nodes.nodes[i + 1]));
    double num = abs_l1(h, 0.0, 1.0);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return num / denom;
}

std::vector<Polynomial> extremal_polys(const NodePartition& nodes) {
    nodes.validate();
    const int d = nodes.degree();
    for (std::size_t i = 0; i + 1 < nodes.nodes.size(); ++i)
        if (!(nodes.nodes[i] < nodes.nodes[i + 1]))
            throw degenerate_partition_error("extremal_polys: empty node cell");
    std::vector<Polynomial> out;
    out.reserve(static_cast<std::size_t>(d) + 1);
    for (int keep = 0; keep <= d; ++keep) {
        if (d == 0) {
            out.push_back(Polynomial::constant(1.0));
            continue;
        }
        // monic: c_d = 1; d constraints of zero area on the other cells
        std::vector<std::vector<double>> a;
        std::vector<double> rhs;
        for (int i = 0; i <= d; ++i) {
            if (i == keep) continue;
            double lo = nodes.nodes[static_cast<std::size_t>(i)];
            double hi = nodes.nodes[static_cast<std::size_t>(i) + 1];
            std::vector<double> row(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = cell_moment(lo, hi, static_cast<std::size_t>(j));
            a.push_back(std::move(row));
            rhs.push_back(-cell_moment(lo, hi, static_cast<std::size_t>(d)));
        }
        std::vector<double> c = solve_dense(std::move(a), std::move(rhs));
        c.push_back(1.0);
        out.push_back(Polynomial(std::move(c)));
    }
    return out;
}

double ratio_sup(const NodePartition& nodes) {
    if (nodes.degree() == 0) return 1.0;
    double best = 1.0;
    for (const auto& h : extremal_polys(nodes)) best = std::max(best, ratio(nodes, h));
    return best;
}

namespace {

NodePartition assemble_symmetric(int degree, const std::vector<double>& left) {
    std::vector<double> nodes{0.0};
    for (double v : left) nodes.push_back(v);
    if (degree % 2 == 1 && degree >= 3) nodes.push_back(0.5);
    for (auto it = left.rbegin(); it != left.rend(); ++it) nodes.push_back(1.0 - *it);
    nodes.push_back(1.0);
    if (degree == 1) nodes = {0.0, 0.5, 1.0};
    return NodePartition{std::move(nodes), 0.0};
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

NodePartition optimize_nodes(int degree, int grid) {
    if (degree < 0 || degree > NodeTable::kMaxDegree)
        throw std::invalid_argument("optimize_nodes supports degrees 0..8");
    if (grid < 4) grid = 4;
    if (degree == 0) return NodePartition{{0.0, 1.0}, 1.0};
    if (degree == 1) {
        // one interior node; symmetry about 0.5 pins it
        NodePartition p = assemble_symmetric(1, {});
        p.ratio = ratio_sup(p);
        return p;
    }
    const int free_params = degree / 2;
    auto objective = [&](const std::vector<double>& left) {
        for (std::size_t i = 0; i + 1 < left.size(); ++i)
            if (left[i] >= left[i + 1]) return std::numeric_limits<double>::infinity();
        if (left.front() <= 0.0 || left.back() >= 0.5) return std::numeric_limits<double>::infinity();
        return ratio_sup(assemble_symmetric(degree, left));
    };

    // multistart: published row, equispaced, and a coarse grid for 1-D cases
    std::vector<std::vector<double>> starts;
    {
        const auto& row = NodeTable::instance().partition(degree).nodes;
        starts.emplace_back(row.begin() + 1, row.begin() + 1 + free_params);
    }
    {
        std::vector<double> eq(static_cast<std::size_t>(free_params));
        for (int i = 0; i < free_params; ++i)
            eq[static_cast<std::size_t>(i)] = 0.5 * (i + 1.0) / (free_params + 1.0);
        starts.push_back(std::move(eq));
    }
    if (free_params == 1) {
        double best_x = 0.25, best_f = std::numeric_limits<double>::infinity();
        for (int g = 1; g < grid; ++g) {
            double x = 0.5 * g / grid;
            double f = objective({x});
            if (f < best_f) {
                best_f = f;
                best_x = x;
            }
        }
        starts.push_back({best_x});
    }

    std::vector<double> best;
    double best_f = std::numeric_limits<double>::infinity();
    for (auto start : starts) {
        std::vector<double> x = start;
        // cyclic per-coordinate golden-section descent
        for (int sweep = 0; sweep < 5; ++sweep) {
            for (int i = 0; i < free_params; ++i) {
                double lo = (i == 0) ? 1e-4 : x[static_cast<std::size_t>(i) - 1] + 1e-4;
                double hi = (i == free_params - 1) ? 0.5 - 1e-4 : x[static_cast<std::size_t>(i) + 1] - 1e-4;
                if (lo >= hi) continue;
                auto g = [&](double v) {
                    auto probe = x;
                    probe[static_cast<std::size_t>(i)] = v;
                    return objective(probe);
                };
                x[static_cast<std::size_t>(i)] = golden_min(g, lo, hi, 0.5 / grid * 1e-3);
            }
        }
        double f = objective(x);
        if (f < best_f) {
            best_f = f;
            best = x;
        }
    }
    NodePartition p = assemble_symmetric(degree, best);
    p.ratio = best_f;
    return p;
}

std::vector<NodeCheckRow> verify_nodes(int d_lo, int d_hi) {
    static const double paper_ratios[] = {1.0, 1.25, 1.423, 1.56, 1.675, 1.774, 1.857, 1.930, 1.999};
    if (d_lo < 0 || d_hi > NodeTable::kMaxDegree || d_lo > d_hi)
        throw std::invalid_argument("verify_nodes: degree range must lie in 0..8");
    std::vector<NodeCheckRow> rows;
    for (int d = d_lo; d <= d_hi; ++d) {
        const auto& p = NodeTable::instance().partition(d);
        rows.push_back(NodeCheckRow{d, p.nodes, ratio_sup(p), paper_ratios[d]});
    }
    return rows;
}

}  // namespace surf
