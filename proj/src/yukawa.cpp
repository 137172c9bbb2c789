#include "epsense/yukawa.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "epsense/errors.hpp"

namespace epsense {

namespace {

void require_pos(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
        throw validation_error(std::string(name) + " must be > 0 and finite (got " +
                               detail::num_str(v) + ")");
}

struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

}  // namespace

void SlabGeometry::validate() const {
    require_pos(t_test, "geometry.t_test");
    require_pos(t_source, "geometry.t_source");
    require_pos(gap, "geometry.gap");
    require_pos(area, "geometry.area");
    require_pos(rho_test, "geometry.rho_test");
    require_pos(rho_a, "geometry.rho_a");
    require_pos(rho_b, "geometry.rho_b");
    if (!(std::isfinite(r_char) && r_char >= 0.0))
        throw validation_error("geometry.r_char must be >= 0 and finite (got " +
                               detail::num_str(r_char) + ")");
}

double SlabGeometry::r_characteristic() const {
    return r_char > 0.0 ? r_char : gap + 0.5 * (t_source + t_test);
}

double yukawa_potential(double m_t, double m_s, double r, double alpha,
                        double lambda, double G) {
    require_pos(r, "r");
    require_pos(lambda, "lambda");
    return -G * m_t * m_s / r * (1.0 + alpha * std::exp(-r / lambda));
}

double yukawa_point_force(double m1, double m2, double r, double alpha,
                          double lambda, double G) {
    require_pos(r, "r");
    require_pos(lambda, "lambda");
    return G * alpha * m1 * m2 * std::exp(-r / lambda) *
           (1.0 / (r * r) + 1.0 / (r * lambda));
}

double slab_yukawa_force(const SlabGeometry& g, double rho_source, double alpha,
                         double lambda, double G) {
    g.validate();
    require_pos(lambda, "lambda");
    return -2.0 * std::numbers::pi * G * alpha * g.rho_test * rho_source *
           lambda * lambda * g.area * std::exp(-g.gap / lambda) *
           (1.0 - std::exp(-g.t_test / lambda)) *
           (1.0 - std::exp(-g.t_source / lambda));
}

double slab_yukawa_gradient(const SlabGeometry& g, double rho_source, double alpha,
                            double lambda, double G) {
    return -slab_yukawa_force(g, rho_source, alpha, lambda, G) / lambda;
}

double differential_signal(const SlabGeometry& g, double alpha, double lambda,
                           double G) {
    return slab_yukawa_gradient(g, g.rho_a - g.rho_b, alpha, lambda, G);
}

namespace detail {

double voxel_pair_sum(const VoxelGrid& test, const VoxelGrid& source,
                      double alpha, double lambda, double G, unsigned threads) {
    // Identical-kernel terms are grouped: every (test column, source
    // column) pair with the same integer lateral offset shares the same
    // lateral displacement, so the 6D sum collapses to offsets x z-pairs
    // weighted by the exact pair multiplicity.
    const int nt = test.nx, ns = source.nx;
    const double h = test.hx;

    // z pairs and the constant mass product per pair
    const double m_test = test.rho * test.hx * test.hx * test.hz;
    const double m_source = source.rho * source.hx * source.hx * source.hz;
    std::vector<double> dz;
    dz.reserve(static_cast<std::size_t>(test.nz) * source.nz);
    for (int a = 0; a < test.nz; ++a)
        for (int b = 0; b < source.nz; ++b)
            dz.push_back((test.z0 + a * test.hz) - (source.z0 + b * source.hz));
    const double mass2 = m_test * m_source;

    // lateral offset range k = j - i, and its multiplicity
    const int k_lo = -(nt - 1);
    const int k_hi = ns - 1;
    auto count = [nt, ns](int k) {
        const int lo = std::max(0, -k);
        const int hi = std::min(nt - 1, ns - 1 - k);
        return hi >= lo ? hi - lo + 1 : 0;
    };
    // grids are co-centered, so centers differ by ((ns - nt)/2 - k) * h;
    // ns - nt is kept even by construction
    const double x_shift = 0.5 * (ns - nt) * h;

    const int n_off = k_hi - k_lo + 1;
    constexpr int kChunks = 64;
    std::vector<double> partial(kChunks, 0.0);
    std::atomic<int> next_chunk{0};

    auto worker = [&]() {
        for (;;) {
            const int chunk = next_chunk.fetch_add(1);
            if (chunk >= kChunks) return;
            const int ky_begin = k_lo + static_cast<int>(
                static_cast<long long>(chunk) * n_off / kChunks);
            const int ky_end = k_lo + static_cast<int>(
                static_cast<long long>(chunk + 1) * n_off / kChunks);
            KahanSum acc;
            for (int ky = ky_begin; ky < ky_end; ++ky) {
                const int cy = count(ky);
                if (cy == 0) continue;
                const double y = x_shift - ky * h;
                for (int kx = k_lo; kx <= k_hi; ++kx) {
                    const int cx = count(kx);
                    if (cx == 0) continue;
                    const double x = x_shift - kx * h;
                    const double rho2 = x * x + y * y;
                    const double w = static_cast<double>(cx) * cy;
                    double cell = 0.0;
                    for (const double z : dz) {
                        const double r = std::sqrt(rho2 + z * z);
                        // z-component of the pair attraction, pulling the
                        // test voxel toward the source (negative z sense)
                        cell -= std::exp(-r / lambda) *
                                (1.0 / (r * r) + 1.0 / (r * lambda)) * (z / r);
                    }
                    acc.add(w * cell);
                }
            }
            partial[chunk] = acc.s + acc.c;
        }
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, kChunks);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    KahanSum total;
    for (double v : partial) total.add(v);
    return G * alpha * mass2 * (total.s + total.c);
}

}  // namespace detail

VoxelResult voxel_yukawa_force(const SlabGeometry& g, double rho_source,
                               double alpha, double lambda, const VoxelSpec& spec,
                               double G) {
    g.validate();
    require_pos(lambda, "lambda");
    if (spec.per_thickness < 8)
        throw validation_error(
            "voxel oracle: resolution must give at least 8 voxels across every "
            "thickness (got " + std::to_string(spec.per_thickness) + ")");
    if (spec.test_lateral < 1)
        throw validation_error("voxel oracle: test_lateral must be >= 1");
    if (!(spec.pad_lambdas >= 1.0))
        throw validation_error("voxel oracle: pad_lambdas must be >= 1");
    if (!(spec.rel_tolerance > 0.0))
        throw validation_error("voxel oracle: rel_tolerance must be > 0");

    const double z_center = g.gap + 0.5 * (g.t_test + g.t_source);
    const double h = spec.lateral_voxel > 0.0 ? spec.lateral_voxel
                                              : std::min(lambda, z_center) / 3.0;

    auto grids = [&](int refine) {
        const int nx_t = spec.test_lateral * refine;
        const double hx = h / refine;
        const int pad = static_cast<int>(std::ceil(spec.pad_lambdas * lambda / hx));
        const int nx_s = nx_t + 2 * pad;

        detail::VoxelGrid test;
        test.nx = nx_t;
        test.nz = spec.per_thickness * refine;
        test.hx = hx;
        test.hz = g.t_test / test.nz;
        test.z0 = g.gap + 0.5 * test.hz;  // source top face at z = 0
        test.rho = g.rho_test;

        detail::VoxelGrid source;
        source.nx = nx_s;
        source.nz = spec.per_thickness * refine;
        source.hx = hx;
        source.hz = g.t_source / source.nz;
        source.z0 = -g.t_source + 0.5 * source.hz;
        source.rho = rho_source;
        return std::pair{test, source};
    };

    const auto [t1, s1] = grids(1);
    const double q1 = detail::voxel_pair_sum(t1, s1, alpha, lambda, G, spec.threads);
    const auto [t2, s2] = grids(2);
    const double q2 = detail::voxel_pair_sum(t2, s2, alpha, lambda, G, spec.threads);

    VoxelResult out;
    out.force = q2 + (q2 - q1) / 3.0;  // one Richardson step on the O(h^2) rule
    out.error_estimate = std::abs(q2 - q1) / 3.0;
    out.area = (t1.nx * t1.hx) * (t1.nx * t1.hx);
    if (!(out.error_estimate <= spec.rel_tolerance * std::abs(out.force)))
        throw numerical_error(
            "voxel oracle: estimated discretization error " +
            detail::num_str(out.error_estimate) + " exceeds " +
            detail::num_str(spec.rel_tolerance) + " x |force| = " +
            detail::num_str(spec.rel_tolerance * std::abs(out.force)) +
            "; refine the resolution");
    return out;
}

ExclusionCurve exclusion_curve(const DetectionFloor& floor, const SlabGeometry& g,
                               const std::vector<double>& lambda_grid, double G) {
    g.validate();
    require_pos(floor.sigma, "floor.sigma");
    require_pos(floor.dw_min, "floor.dw_min");
    require_pos(floor.grad_min, "floor.grad_min");
    if (lambda_grid.empty())
        throw validation_error("exclusion_curve: empty lambda grid");

    ExclusionCurve out;
    out.floor = floor;
    out.geometry = g;
    out.lambdas = lambda_grid;
    out.alphas.reserve(lambda_grid.size());
    out.alphas_linear.reserve(lambda_grid.size());

    // Same signal, two floors: the linear-sensor gradient floor is the
    // sqrt-law one scaled by sigma / dw_min.
    const double grad_min_linear = floor.grad_min * (floor.sigma / floor.dw_min);

    for (double lambda : lambda_grid) {
        require_pos(lambda, "lambda");
        const double signal = std::abs(differential_signal(g, 1.0, lambda, G));
        if (!(signal > 0.0))
            throw numerical_error("exclusion_curve: zero differential signal at lambda = " +
                                  detail::num_str(lambda) + " (degenerate geometry)");
        out.alphas.push_back(floor.grad_min / signal);
        out.alphas_linear.push_back(grad_min_linear / signal);
    }
    return out;
}

}  // namespace epsense
