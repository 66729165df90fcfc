#pragma once

#include "graphs.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

namespace kvlie {

using Point = std::complex<double>;

enum class AngleKind { hyperbolic, euclidean };

/// φ_h(p,q) = arg((q-p)/(q-p̄)) or the Euclidean arg(q-p), in (-π, π].
inline double angle(Point p, Point q, AngleKind kind)
{
    if (p == q) throw std::invalid_argument("angle of coincident points");
    if (kind == AngleKind::euclidean) return std::arg(q - p);
    if (p.imag() < 0 || q.imag() < 0) throw std::invalid_argument("hyperbolic angle needs points in the closed upper half-plane");
    return std::arg((q - p) / (q - std::conj(p)));
}

enum class AngleEnd { source, target };

/// Central-difference derivative of the angle when one end moves along `direction`.
inline double angle_derivative(Point p, Point q, AngleKind kind, AngleEnd end, Point direction, double h = 1e-6)
{
    const Point d = direction * h;
    auto at = [&](Point delta) {
        return end == AngleEnd::source ? angle(p + delta, q, kind) : angle(p, q + delta, kind);
    };
    double diff = at(d) - at(-d);
    // unwrap across the branch cut
    if (diff > std::numbers::pi) diff -= 2 * std::numbers::pi;
    if (diff < -std::numbers::pi) diff += 2 * std::numbers::pi;
    return diff / (2 * h);
}

enum class EstimateMethod { quadrature, monte_carlo };

struct WeightEstimate {
    double value = 0;
    std::optional<double> standard_error;  // Monte Carlo only
    std::optional<double> tolerance;       // quadrature only: the requested tolerance
    double error_estimate = 0;             // quadrature: integrator's own error estimate
    std::uint64_t samples = 0;             // Monte Carlo samples, or quadrature levels
    std::uint64_t seed = 0;
    std::uint64_t degenerate = 0;          // Monte Carlo samples discarded as degenerate
    EstimateMethod method = EstimateMethod::quadrature;
};

/// tanh-sinh quadrature of f on (a, b). f receives (s, 1 - s) with the complement computed
/// accurately near b.
inline WeightEstimate quadrature(const std::function<double(double, double)>& f, double a, double b, double tolerance)
{
    if (!(tolerance > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0, l1 = 0;
    std::size_t levels = 0;
    auto g = [&](double s, double sc) {
        // sc is the signed distance to the nearer endpoint
        const double one_minus = (sc > 0 && b == 1.0) ? sc : 1.0 - s;
        return f(s, one_minus);
    };
    const double v = integrator.integrate(g, a, b, tolerance, &error, &l1, &levels);
    if (!(error <= tolerance)) throw std::runtime_error("quadrature did not reach tolerance " + std::to_string(tolerance));
    WeightEstimate out;
    out.value = v;
    out.tolerance = tolerance;
    out.error_estimate = error;
    out.samples = levels;
    out.method = EstimateMethod::quadrature;
    return out;
}

/// The 1-form -1/(8π²)(log(1-s)/s + log(s)/(1-s)) ds on (0, 1).
inline double example_form(double s, double one_minus_s)
{
    return -(std::log(one_minus_s) / s + std::log(s) / one_minus_s) / (8 * std::numbers::pi * std::numbers::pi);
}

inline WeightEstimate example_weight_quadrature(double tolerance)
{
    return quadrature([](double s, double sc) { return example_form(s, sc); }, 0.0, 1.0, tolerance);
}

/// Same integral as twice the integral over (0, 1/2), using s <-> 1-s symmetry.
inline WeightEstimate example_weight_quadrature_half(double tolerance)
{
    auto e = quadrature([](double s, double) { return example_form(s, 1.0 - s); }, 0.0, 0.5, tolerance / 2);
    e.value *= 2;
    e.error_estimate *= 2;
    e.tolerance = tolerance;
    return e;
}

struct MonteCarloOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t chunk = 1 << 16;
    unsigned threads = 0;          // 0: hardware concurrency
    double max_degenerate = 0.01;  // fraction of degenerate samples tolerated
};

namespace detail {

/// Sampling density on the plane for one aerial point: an equal mixture of polar clusters of
/// radius 1 around each center (ground centers use the upper half-disc) and a heavy-tailed
/// polar component around 1/2. Points below the real axis integrate to zero.
class PointProposal {
public:
    PointProposal(std::vector<Point> ground_centers, std::vector<Point> aerial_centers)
        : ground_(std::move(ground_centers)), aerial_(std::move(aerial_centers))
    {
    }

    template <class Rng>
    Point sample(Rng& rng) const
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t parts = ground_.size() + aerial_.size() + 1;
        const auto pick = std::min(parts - 1, static_cast<std::size_t>(u(rng) * static_cast<double>(parts)));
        const double a = u(rng), b = u(rng);
        if (pick < ground_.size()) return ground_[pick] + std::polar(a, std::numbers::pi * b);
        if (pick < ground_.size() + aerial_.size())
            return aerial_[pick - ground_.size()] + std::polar(a, 2 * std::numbers::pi * b);
        const double r = a / (1.0 - a);
        return Point(0.5, 0.0) + std::polar(r, std::numbers::pi * b);
    }

    double density(Point z) const
    {
        const double parts = static_cast<double>(ground_.size() + aerial_.size() + 1);
        double d = 0;
        for (const Point& c : ground_) {
            const double r = std::abs(z - c);
            if (r < 1 && z.imag() > 0) d += 1.0 / (std::numbers::pi * r);
        }
        for (const Point& c : aerial_) {
            const double r = std::abs(z - c);
            if (r < 1) d += 1.0 / (2 * std::numbers::pi * r);
        }
        if (z.imag() > 0) {
            const double r = std::abs(z - Point(0.5, 0.0));
            d += 1.0 / ((1 + r) * (1 + r) * std::numbers::pi * r);
        }
        return d / parts;
    }

private:
    std::vector<Point> ground_, aerial_;
};

/// Gradient of φ_h(p, q) with respect to (Re p, Im p) and (Re q, Im q).
inline std::array<double, 4> hyperbolic_gradient(Point p, Point q)
{
    const Point i(0, 1);
    const Point a = 1.0 / (q - p), b = 1.0 / (q - std::conj(p));
    // φ = arg(q - p) - arg(q - p̄); d arg(w) = Im(dw / w)
    return {(-a + b).imag(), (-i * a - i * b).imag(), (a - b).imag(), (i * a - i * b).imag()};
}

inline double determinant(std::vector<double> m, std::size_t n)
{
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r * n + c]) > std::abs(m[p * n + c])) p = r;
        if (m[p * n + c] == 0) return 0;
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m[p * n + k], m[c * n + k]);
            det = -det;
        }
        det *= m[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r * n + c] / m[c * n + c];
            for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
        }
    }
    return det;
}

struct ChunkSums {
    double sum = 0, sum_sq = 0;
    std::uint64_t count = 0, degenerate = 0;
};

/// Runs `draw(rng, sums)` over seed-derived chunks, possibly on several threads, and merges
/// the chunk sums in chunk order.
template <class Draw>
WeightEstimate run_chunks(const MonteCarloOptions& opt, Draw draw)
{
    if (opt.samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
    if (opt.chunk == 0) throw std::invalid_argument("Monte Carlo chunk size must be positive");
    const std::uint64_t chunks = (opt.samples + opt.chunk - 1) / opt.chunk;
    std::vector<ChunkSums> sums(chunks);
    auto work = [&](std::uint64_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 rng(seq);
        const std::uint64_t n = std::min(opt.chunk, opt.samples - c * opt.chunk);
        for (std::uint64_t k = 0; k < n; ++k) draw(rng, sums[c]);
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    if (threads <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) work(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::uint64_t c = t; c < chunks; c += threads) work(c);
            });
        for (auto& th : pool) th.join();
    }
    ChunkSums total;
    for (const auto& s : sums) {
        total.sum += s.sum;
        total.sum_sq += s.sum_sq;
        total.count += s.count;
        total.degenerate += s.degenerate;
    }
    const double rate = static_cast<double>(total.degenerate) / static_cast<double>(opt.samples);
    if (rate > opt.max_degenerate)
        throw std::runtime_error("Monte Carlo degenerate sample rate " + std::to_string(rate) + " exceeds threshold");
    const double n = static_cast<double>(opt.samples);
    const double mean = total.sum / n;
    const double var = std::max(0.0, (total.sum_sq / n - mean * mean) * n / (n - 1));
    WeightEstimate out;
    out.value = mean;
    out.standard_error = std::sqrt(var / n);
    out.samples = opt.samples;
    out.seed = opt.seed;
    out.degenerate = total.degenerate;
    out.method = EstimateMethod::monte_carlo;
    return out;
}

}  // namespace detail

/// Orientation of the gauge-fixed configuration space relative to dx_1 ∧ dy_1 ∧ ... ∧ dx_n ∧ dy_n;
/// fixed once so that the n = 1 graph with edges (to x, to y) weighs +1/2.
inline constexpr double configuration_orientation = 1.0;

/// Importance-sampled weight (2π)^{-2n} ∫ ∧_e dφ_e with the grounds at 0 and 1 and the
/// aerial points free in the upper half-plane. Edge list order gives the form's factor order.
inline WeightEstimate weight_montecarlo(const KGraph& g, const MonteCarloOptions& opt = {})
{
    validate(g);
    if (g.n < 1 || g.n > 2) throw std::invalid_argument("Monte Carlo weights are available for n = 1 and n = 2");
    const std::size_t dim = 2 * static_cast<std::size_t>(g.n);
    const double norm = configuration_orientation / std::pow(2 * std::numbers::pi, static_cast<double>(dim));
    const std::vector<Point> grounds{{0, 0}, {1, 0}};
    auto draw = [&](std::mt19937_64& rng, detail::ChunkSums& acc) {
        std::vector<Point> z;
        double q = 1;
        bool inside = true;
        for (int k = 0; k < g.n; ++k) {
            detail::PointProposal prop(grounds, z);
            const Point p = prop.sample(rng);
            q *= prop.density(p);
            inside = inside && p.imag() > 0;
            z.push_back(p);
        }
        ++acc.count;
        if (!inside) return;  // outside the domain: contributes zero
        auto pos = [&](int v) { return g.is_ground(v) ? grounds[static_cast<std::size_t>(v - g.n)] : z[static_cast<std::size_t>(v)]; };
        std::vector<double> jac(dim * dim, 0.0);
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const auto [s, t] = g.edges[e];
            if (pos(s) == pos(t)) {
                ++acc.degenerate;
                return;
            }
            const auto grad = detail::hyperbolic_gradient(pos(s), pos(t));
            jac[e * dim + 2 * static_cast<std::size_t>(s)] += grad[0];
            jac[e * dim + 2 * static_cast<std::size_t>(s) + 1] += grad[1];
            if (!g.is_ground(t)) {
                jac[e * dim + 2 * static_cast<std::size_t>(t)] += grad[2];
                jac[e * dim + 2 * static_cast<std::size_t>(t) + 1] += grad[3];
            }
        }
        const double v = norm * detail::determinant(std::move(jac), dim) / q;
        if (!std::isfinite(v) || !(q > 0)) {
            ++acc.degenerate;
            return;
        }
        acc.sum += v;
        acc.sum_sq += v * v;
    };
    return detail::run_chunks(opt, draw);
}

/// Integrand of the example over the fiber at s: the 3-form's coefficient
/// y² / ((x²+y²)((x-s)²+y²)((x-1)²+y²)), scaled by 1/(4π³) so that its integral over the
/// upper half-plane is the displayed 1-form.
inline double example_density(Point z, double s)
{
    const double y = z.imag();
    auto d = [&](double c) { return std::norm(z - Point(c, 0)); };
    return y * y / (d(0) * d(s) * d(1)) / (4 * std::pow(std::numbers::pi, 3));
}

/// Monte Carlo over (s, z) for the example: agrees with example_weight_quadrature.
inline WeightEstimate example_weight_montecarlo(const MonteCarloOptions& opt = {})
{
    auto draw = [&](std::mt19937_64& rng, detail::ChunkSums& acc) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double s = u(rng);
        detail::PointProposal prop({{0, 0}, {s, 0}, {1, 0}}, {});
        const Point z = prop.sample(rng);
        ++acc.count;
        if (z.imag() <= 0) return;
        const double v = example_density(z, s) / prop.density(z);
        if (!std::isfinite(v)) {
            ++acc.degenerate;
            return;
        }
        acc.sum += v;
        acc.sum_sq += v * v;
    };
    return detail::run_chunks(opt, draw);
}

/// Monte Carlo of the fiber integral at fixed s, to compare with example_form(s, 1-s).
inline WeightEstimate example_fiber_montecarlo(double s, const MonteCarloOptions& opt = {})
{
    if (!(s > 0 && s < 1)) throw std::invalid_argument("fiber parameter must lie in (0, 1)");
    auto draw = [&](std::mt19937_64& rng, detail::ChunkSums& acc) {
        detail::PointProposal prop({{0, 0}, {s, 0}, {1, 0}}, {});
        const Point z = prop.sample(rng);
        ++acc.count;
        if (z.imag() <= 0) return;
        const double v = example_density(z, s) / prop.density(z);
        if (!std::isfinite(v)) {
            ++acc.degenerate;
            return;
        }
        acc.sum += v;
        acc.sum_sq += v * v;
    };
    return detail::run_chunks(opt, draw);
}

}  // namespace kvlie
