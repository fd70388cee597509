#include "grusin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "grusin/parallel.hpp"

namespace grusin::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Energy of the node polyline with the du allocation already eliminated:
// E = U^2 / (dt sum_k w_k) + sum_k |dx_k|^2 / dt.
class NodeEnergy {
  public:
    NodeEnergy(Eigen::MatrixXd nodes, double u_total)
        : nodes_(std::move(nodes)), u_total_(u_total) {
        const int k = segments();
        w_.resize(k);
        for (int i = 0; i < k; ++i) w_[i] = midpoint_sq(i);
        w_sum_ = w_.sum();
        dx_sum_ = 0.0;
        for (int i = 0; i < k; ++i)
            dx_sum_ += (nodes_.col(i + 1) - nodes_.col(i)).squaredNorm();
    }

    int segments() const { return static_cast<int>(nodes_.cols()) - 1; }
    const Eigen::MatrixXd& nodes() const { return nodes_; }
    double w_sum() const { return w_sum_; }

    double value() const {
        const double dt = 1.0 / segments();
        double fiber = 0.0;
        if (u_total_ != 0.0) {
            if (w_sum_ <= 0.0) return kInf;
            fiber = u_total_ * u_total_ / (dt * w_sum_);
        }
        return fiber + dx_sum_ / dt;
    }

    // Trial value with node j, coordinate c moved to xi (no state change).
    double trial(int j, int c, double xi) const {
        double w_sum = w_sum_, dx_sum = dx_sum_;
        add_node_terms(j, c, nodes_(c, j), -1.0, w_sum, dx_sum);
        add_node_terms(j, c, xi, +1.0, w_sum, dx_sum);
        const double dt = 1.0 / segments();
        double fiber = 0.0;
        if (u_total_ != 0.0) {
            if (w_sum <= 0.0) return kInf;
            fiber = u_total_ * u_total_ / (dt * w_sum);
        }
        return fiber + dx_sum / dt;
    }

    void commit(int j, int c, double xi) {
        add_node_terms(j, c, nodes_(c, j), -1.0, w_sum_, dx_sum_);
        nodes_(c, j) = xi;
        add_node_terms(j, c, xi, +1.0, w_sum_, dx_sum_);
        w_[j - 1] = midpoint_sq(j - 1);
        w_[j] = midpoint_sq(j);
    }

    Eigen::VectorXd du_allocation() const {
        const int k = segments();
        Eigen::VectorXd du = Eigen::VectorXd::Zero(k);
        if (u_total_ != 0.0 && w_sum_ > 0.0)
            for (int i = 0; i < k; ++i) du[i] = u_total_ * w_[i] / w_sum_;
        return du;
    }

  private:
    double midpoint_sq(int seg) const {
        return 0.25 * (nodes_.col(seg) + nodes_.col(seg + 1)).squaredNorm();
    }

    // w and dx contributions that involve node j when its coordinate c is v.
    void add_node_terms(int j, int c, double v, double sign, double& w_sum,
                        double& dx_sum) const {
        Eigen::VectorXd node = nodes_.col(j);
        node[c] = v;
        const Eigen::VectorXd& prev = nodes_.col(j - 1);
        const Eigen::VectorXd& next = nodes_.col(j + 1);
        w_sum += sign * 0.25 * ((prev + node).squaredNorm() +
                                (node + next).squaredNorm());
        dx_sum += sign * ((node - prev).squaredNorm() +
                          (next - node).squaredNorm());
    }

    Eigen::MatrixXd nodes_;
    double u_total_;
    Eigen::VectorXd w_;
    double w_sum_ = 0.0;
    double dx_sum_ = 0.0;
};

// Derivative-free coordinate sweeps: parabolic trial steps per node
// coordinate with an adaptive step scale.
double relax(NodeEnergy& energy, int max_sweeps, double step0) {
    const int k = energy.segments();
    const int dims = static_cast<int>(energy.nodes().rows());
    double best = energy.value();
    double step = step0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double before = best;
        for (int j = 1; j < k; ++j) {
            for (int c = 0; c < dims; ++c) {
                double x0 = energy.nodes()(c, j);
                double fp = energy.trial(j, c, x0 + step);
                double fm = energy.trial(j, c, x0 - step);
                double denom = fp - 2.0 * best + fm;
                double cand = x0;
                if (std::isfinite(fp) && std::isfinite(fm) && denom > 0.0) {
                    double shift = -0.5 * step * (fp - fm) / denom;
                    shift = std::clamp(shift, -8.0 * step, 8.0 * step);
                    cand = x0 + shift;
                } else if (fp < best || fm < best) {
                    cand = fp < fm ? x0 + step : x0 - step;
                }
                if (cand != x0) {
                    double fc = energy.trial(j, c, cand);
                    if (fc < best) {
                        energy.commit(j, c, cand);
                        best = fc;
                    }
                }
            }
        }
        double gained = before - best;
        if (gained < 1e-13 * (std::abs(best) + 1.0)) {
            step *= 0.35;
            if (step < 1e-9 * step0) break;
        }
    }
    return best;
}

Eigen::MatrixXd refine_nodes(const Eigen::MatrixXd& nodes, int new_segments) {
    const int old_segments = static_cast<int>(nodes.cols()) - 1;
    Eigen::MatrixXd out(nodes.rows(), new_segments + 1);
    for (int i = 0; i <= new_segments; ++i) {
        double pos = static_cast<double>(i) * old_segments / new_segments;
        int base = std::min(static_cast<int>(pos), old_segments - 1);
        double frac = pos - base;
        out.col(i) = (1.0 - frac) * nodes.col(base) + frac * nodes.col(base + 1);
    }
    return out;
}

double run_restart(const Point& p1, const Point& p2, int segments,
                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = p1.dim();
    const double u_total = p2.u - p1.u;

    // Coarse-to-fine ladder ending at the requested resolution.
    std::vector<int> ladder{segments};
    while (ladder.back() > 32) ladder.push_back(ladder.back() / 2);
    std::reverse(ladder.begin(), ladder.end());

    // Straight line plus one sinusoidal bump with random direction/amplitude;
    // geodesic arcs are sinusoids, so the basin is reachable from these.
    Eigen::VectorXd dir(n);
    for (int i = 0; i < n; ++i) dir[i] = 2.0 * uniform01(rng) - 1.0;
    if (dir.norm() < 1e-12) dir[0] = 1.0;
    dir.normalize();
    double scale = std::max({p1.x.norm(), p2.x.norm(),
                             std::sqrt(2.0 * std::abs(u_total) / kPi), 0.5});
    double amp = scale * (0.2 + 1.4 * uniform01(rng));

    int k0 = ladder.front();
    Eigen::MatrixXd nodes(n, k0 + 1);
    for (int i = 0; i <= k0; ++i) {
        double t = static_cast<double>(i) / k0;
        nodes.col(i) =
            (1.0 - t) * p1.x + t * p2.x + amp * std::sin(kPi * t) * dir;
    }

    double value = kInf;
    for (std::size_t level = 0; level < ladder.size(); ++level) {
        if (level > 0) nodes = refine_nodes(nodes, ladder[level]);
        NodeEnergy energy(nodes, u_total);
        int sweeps = level + 1 == ladder.size() ? 60 : 140;
        value = relax(energy, sweeps, 0.1 * scale);
        nodes = energy.nodes();
    }
    return value;
}

}  // namespace

double path_energy(const PathDiscretization& disc) {
    const int k = disc.segments();
    if (k < 1 || disc.nodes.cols() != k + 1)
        throw std::invalid_argument("path_energy: inconsistent discretization");
    const double dt = 1.0 / k;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double w = 0.25 * (disc.nodes.col(i) + disc.nodes.col(i + 1)).squaredNorm();
        double du = disc.du[i];
        if (w <= 0.0) {
            if (du != 0.0) return kInf;
        } else {
            total += du * du / (w * dt);
        }
        total += (disc.nodes.col(i + 1) - disc.nodes.col(i)).squaredNorm() / dt;
    }
    return total;
}

double path_minimize_distance(const Point& p1, const Point& p2, int segments,
                              int restarts, std::uint64_t seed) {
    if (p1.dim() != p2.dim() || p1.dim() < 1)
        throw std::invalid_argument("path_minimize_distance: dimension mismatch");
    if (segments < 8) throw std::invalid_argument("need at least 8 segments");
    if (restarts < 1) throw std::invalid_argument("need at least 1 restart");

    std::vector<double> results(restarts, kInf);
    parallel_for_index(restarts, [&](std::size_t r) {
        std::uint64_t rseed = seed ^ (0x9e3779b97f4a7c15ULL * (r + 1));
        results[r] = run_restart(p1, p2, segments, rseed);
    });
    double best = *std::min_element(results.begin(), results.end());
    return std::sqrt(best);
}

HermiteBasis::HermiteBasis(int order_, double lambda_, int n_)
    : order(order_), lambda(lambda_), n(n_) {
    if (order < 1) throw std::invalid_argument("HermiteBasis: order must be >= 1");
    if (lambda == 0.0)
        throw std::invalid_argument("HermiteBasis: lambda must be nonzero");
    if (n != 1 && n != 2)
        throw std::invalid_argument("HermiteBasis: only n in {1, 2} supported");
}

Eigen::VectorXd HermiteBasis::functions_1d(double y) const {
    Eigen::VectorXd psi(order + 1);
    psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * y * y);
    if (order >= 1) psi[1] = std::sqrt(2.0) * y * psi[0];
    for (int k = 2; k <= order; ++k)
        psi[k] = std::sqrt(2.0 / k) * y * psi[k - 1] -
                 std::sqrt((k - 1.0) / k) * psi[k - 2];
    return psi;
}

double HermiteBasis::orthonormality_defect(int max_order) const {
    max_order = std::min(max_order, order);
    // Composite Simpson over the numerically supported range.
    const double half_width = std::sqrt(2.0 * (2.0 * max_order + 1.0)) + 10.0;
    const int panels = 4000;
    const double h = 2.0 * half_width / panels;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(max_order + 1, max_order + 1);
    for (int i = 0; i <= panels; ++i) {
        double y = -half_width + i * h;
        double wt = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        Eigen::VectorXd psi = functions_1d(y).head(max_order + 1);
        gram.noalias() += (wt * h / 3.0) * psi * psi.transpose();
    }
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff();
}

double hermite_series_kernel(double t, double lambda, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& xi,
                             const HermiteBasis& basis, double* tail_bound,
                             double tol) {
    if (!(t > 0.0))
        throw std::invalid_argument("hermite_series_kernel: t must be > 0");
    const double al = std::abs(lambda);
    const int n = basis.n;
    if (x.size() != n || xi.size() != n)
        throw std::invalid_argument("hermite_series_kernel: dimension mismatch");
    const double sq = std::sqrt(al);
    const int N = basis.order;

    // Cramer's bound |psi_k| <= 1.0865 pi^{-1/4} makes the tail geometric.
    const double psi_sup_sq = std::pow(1.086435 * std::pow(kPi, -0.25), 2.0);
    const double q = std::exp(-2.0 * al * t);
    double tail;
    if (n == 1) {
        tail = sq * psi_sup_sq * std::exp(-al * (2.0 * (N + 1) + 1.0) * t) /
               (1.0 - q);
    } else {
        // sum_{j > N} (j+1) q^j = q^{N+1} ((N+2) - (N+1) q) / (1-q)^2
        double qn = std::pow(q, N + 1);
        tail = al * psi_sup_sq * psi_sup_sq * std::exp(-2.0 * al * t) * qn *
               ((N + 2) - (N + 1) * q) / ((1.0 - q) * (1.0 - q));
    }
    if (tail_bound) *tail_bound = tail;
    else if (tail > tol)
        throw TruncationError("hermite_series_kernel: tail bound exceeds tolerance");

    if (n == 1) {
        Eigen::VectorXd px = basis.functions_1d(sq * x[0]);
        Eigen::VectorXd pxi = basis.functions_1d(sq * xi[0]);
        double sum = 0.0;
        for (int k = N; k >= 0; --k)
            sum += std::exp(-al * (2.0 * k + 1.0) * t) * (px[k] * pxi[k]);
        return sq * sum;
    }
    Eigen::VectorXd px1 = basis.functions_1d(sq * x[0]);
    Eigen::VectorXd pxi1 = basis.functions_1d(sq * xi[0]);
    Eigen::VectorXd px2 = basis.functions_1d(sq * x[1]);
    Eigen::VectorXd pxi2 = basis.functions_1d(sq * xi[1]);
    double sum = 0.0;
    for (int a1 = 0; a1 <= N; ++a1) {
        double f1 = px1[a1] * pxi1[a1];
        for (int a2 = 0; a2 <= N - a1; ++a2)
            sum += std::exp(-al * (2.0 * (a1 + a2) + 2.0) * t) *
                   (f1 * (px2[a2] * pxi2[a2]));
    }
    return al * sum;
}

}  // namespace grusin::oracle
