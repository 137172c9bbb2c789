#pragma once

#include <vector>

#include "epsense/metrology.hpp"

namespace epsense {

/// CODATA SI value; overridable in the calls below for unit experiments.
inline constexpr double kGNewton = 6.674e-11;  // m^3 kg^-1 s^-2

/// Parallel-plate test/source geometry. The source is a plate of
/// alternating high/low density strips (densities rho_a, rho_b); the
/// differential signal compares the high-density-facing and
/// low-density-facing configurations at full overlap area.
struct SlabGeometry {
    double t_test = 50e-9;     // test-slab thickness [m]
    double t_source = 500e-9;  // source-slab thickness [m]
    double gap = 100e-9;       // face-to-face separation [m]
    double area = 1e-6;        // lateral overlap area [m^2]
    double rho_test = 3100.0;  // test density [kg/m^3]
    double rho_a = 19300.0;    // source strip density, high (Au)
    double rho_b = 2330.0;     // source strip density, low (Si)
    double r_char = 375e-9;    // separation used for force scales [m];
                               // 0 derives center-to-center from the stack

    void validate() const;

    /// r_char if set, else gap + (t_source + t_test) / 2.
    double r_characteristic() const;
};

/// Point-mass pair potential -G m_t m_s / r (1 + alpha e^{-r/lambda}).
double yukawa_potential(double m_t, double m_s, double r, double alpha,
                        double lambda, double G = kGNewton);

/// Magnitude of the alpha-term attraction between two point masses:
/// G alpha m1 m2 e^{-r/lambda} (1/r^2 + 1/(r lambda)).
double yukawa_point_force(double m1, double m2, double r, double alpha,
                          double lambda, double G = kGNewton);

/// Yukawa-only normal force between parallel slabs in the infinite
/// lateral extent approximation. Derivation: integrating the pair term
/// -G alpha m1 m2 e^{-r/l} / r over an infinite sheet of areal density s
/// at perpendicular distance z gives V(z) = -2 pi G alpha s l e^{-z/l}
/// per unit test mass (substitute r dr = R dR); stacking source sheets
/// across t_s and test sheets across t_t gives the interaction energy
///   U(d) = -2 pi G alpha rho_t rho_s l^3 A e^{-d/l}
///          (1 - e^{-t_t/l}) (1 - e^{-t_s/l})
/// and the force F = -dU/dd = U/l. F < 0 for alpha > 0: the force pulls
/// the gap closed (attractive sign convention).
double slab_yukawa_force(const SlabGeometry& g, double rho_source, double alpha,
                         double lambda, double G = kGNewton);

/// dF/d(gap) = -F/lambda exactly: only the e^{-gap/lambda} factor of the
/// closed form depends on the gap.
double slab_yukawa_gradient(const SlabGeometry& g, double rho_source,
                            double alpha, double lambda, double G = kGNewton);

/// Gradient contrast between the high- and low-density source faces,
/// i.e. slab_yukawa_gradient evaluated with rho_a - rho_b. This is the
/// perturbing force gradient seen by the frequency-shift chain; the
/// electromagnetic background cancels in the same comparison.
double differential_signal(const SlabGeometry& g, double alpha, double lambda,
                           double G = kGNewton);

/// Resolution/extent knobs of the brute-force check. The base grid uses
/// per_thickness voxels across each slab thickness, a square test patch
/// of test_lateral voxels per side, and a source patch padded past the
/// test patch by pad_lambdas * lambda on every side (so every test
/// column sees an effectively unbounded source).
struct VoxelSpec {
    int per_thickness = 8;
    int test_lateral = 12;
    double lateral_voxel = 0.0;  // [m]; 0 picks min(lambda, z_center)/3
    double pad_lambdas = 8.0;
    double rel_tolerance = 0.01;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct VoxelResult {
    double force = 0.0;           // Richardson-extrapolated pair sum
    double error_estimate = 0.0;  // |Q(h/2) - Q(h)| / 3
    double area = 0.0;            // lateral area of the summed test patch
};

/// Brute-force double sum of pairwise point Yukawa forces over voxelized
/// test and source volumes (midpoint rule, one Richardson refinement).
/// Errors out if the estimated discretization error exceeds
/// rel_tolerance * |force|. Deterministic for any thread count: the sum
/// is partitioned into fixed compensated-summation chunks merged in
/// index order.
VoxelResult voxel_yukawa_force(const SlabGeometry& g, double rho_source,
                               double alpha, double lambda,
                               const VoxelSpec& spec, double G = kGNewton);

namespace detail {

/// One axis-aligned voxel grid: nx^2 lateral midpoints spaced hx around
/// x = 0, nz depth midpoints spaced hz starting at z0 (lowest center).
struct VoxelGrid {
    int nx = 1;
    int nz = 1;
    double hx = 0.0;
    double hz = 0.0;
    double z0 = 0.0;
    double rho = 0.0;
};

/// Exact pairwise sum of point-Yukawa normal forces between two grids
/// sharing the lateral spacing hx. Grouped by lateral offset (identical
/// terms counted by multiplicity), which reorganizes but does not
/// approximate the double sum.
double voxel_pair_sum(const VoxelGrid& test, const VoxelGrid& source,
                      double alpha, double lambda, double G, unsigned threads);

}  // namespace detail

/// Minimum detectable |alpha| per lambda for both floors. The linear
/// floor is recovered from the DetectionFloor fields (grad_min scaled by
/// sigma / dw_min), so the two curves differ by a lambda-independent
/// factor.
struct ExclusionCurve {
    std::vector<double> lambdas;
    std::vector<double> alphas;         // sqrt-law (EP) floor
    std::vector<double> alphas_linear;  // linewidth-limited linear floor
    DetectionFloor floor;
    SlabGeometry geometry;
};

ExclusionCurve exclusion_curve(const DetectionFloor& floor, const SlabGeometry& g,
                               const std::vector<double>& lambda_grid,
                               double G = kGNewton);

}  // namespace epsense
