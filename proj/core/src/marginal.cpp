#include "opinet/marginal.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace opinet {

namespace {

// Dormand-Prince 5(4) embedded pair, absolute error control.
template <typename Deriv>
void dopri5_advance(Eigen::VectorXd& y, double t0, double t1, double abs_tol,
                    const Deriv& f) {
    // the node coefficients c_i are unused: the system is autonomous
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t0;
    double h = (t1 - t0) / 16.0;
    Eigen::VectorXd k1 = f(y);
    while (t < t1) {
        h = std::min(h, t1 - t);
        Eigen::VectorXd k2 = f(y + h * (a21 * k1));
        Eigen::VectorXd k3 = f(y + h * (a31 * k1 + a32 * k2));
        Eigen::VectorXd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Eigen::VectorXd k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Eigen::VectorXd k6 =
            f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Eigen::VectorXd ynew =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Eigen::VectorXd k7 = f(ynew); // FSAL
        Eigen::VectorXd err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err_norm = err.cwiseAbs().maxCoeff() / abs_tol;
        const bool force = h <= 1e-13 * (t1 - t0); // step underflow guard
        if (err_norm <= 1.0 || force) {
            t += h;
            y = std::move(ynew);
            k1 = std::move(k7);
        }
        const double factor =
            err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
}

} // namespace

MarginalTrajectory marginal_ode_solve(const NetworkModel& network, double lambda,
                                      const MarginalField& initial,
                                      std::span<const double> grid,
                                      double abs_tol) {
    if (!network.identical_agents())
        throw ValidationError("marginal solver: requires identical agents");
    if (lambda < 0.0)
        throw ValidationError("marginal solver: lambda must be >= 0");
    const int n = network.agent_count();
    const int m = network.opinion_count();
    if (initial.rows() != n || initial.cols() != m)
        throw DimensionMismatch("marginal solver: initial field has wrong shape");
    for (int r = 0; r < n; ++r)
        if (!is_probability_vector(initial.row(r).transpose(), 1e-9))
            throw ValidationError("marginal solver: row " + std::to_string(r + 1) +
                                  " of the initial field is not a distribution");

    const Eigen::MatrixXd& q = network.agent(0).matrix();
    const Graph& graph = network.graph();

    auto deriv = [&](const Eigen::VectorXd& flat) {
        Eigen::Map<const Eigen::MatrixXd> x(flat.data(), n, m);
        Eigen::MatrixXd dx = x * q;
        if (lambda > 0.0) {
            for (int r = 0; r < n; ++r) {
                const int deg = graph.degree(r);
                if (deg == 0) continue; // stand-alone dynamics only
                Eigen::RowVectorXd avg = Eigen::RowVectorXd::Zero(m);
                for (int k : graph.neighbors(r)) avg += x.row(k);
                dx.row(r) += lambda * (avg / deg - x.row(r));
            }
        }
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(dx.data(), n * m));
    };

    MarginalTrajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.fields.reserve(grid.size());

    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(initial.data(), n * m);
    double t = 0.0;
    for (double target : grid) {
        if (target < t) throw ValidationError("marginal solver: grid must be increasing");
        if (target > t) dopri5_advance(y, t, target, abs_tol, deriv);
        t = target;
        out.fields.emplace_back(Eigen::Map<const Eigen::MatrixXd>(y.data(), n, m));
    }
    return out;
}

PairJointTrajectory pair_joint_ode_solve(int n, double q12, double q21,
                                         double lambda, PairJointState initial,
                                         std::span<const double> grid) {
    if (n < 2) throw ValidationError("pair solver: need N >= 2");
    if (!(q12 > 0.0) || !(q21 > 0.0) || lambda < 0.0)
        throw ValidationError("pair solver: invalid parameters");
    if (initial.pi11 < 0.0 || initial.pi22 < 0.0 ||
        initial.pi11 + initial.pi22 > 1.0 + 1e-12)
        throw ValidationError("pair solver: initial state outside the simplex");

    Eigen::Vector2d b(q21 + lambda / (n - 1), q12 + lambda / (n - 1));
    Eigen::Matrix2d k;
    k << 2 * q12, 0, 0, 2 * q21;
    k += b * Eigen::RowVector2d::Ones();
    const Eigen::Vector2d xbar = k.fullPivLu().solve(b);
    const Eigen::Vector2d x0(initial.pi11, initial.pi22);

    PairJointTrajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.states.reserve(grid.size());
    for (double t : grid) {
        if (t < 0.0) throw ValidationError("pair solver: negative time");
        const Eigen::Matrix2d e = (-k * t).exp();
        const Eigen::Vector2d x = xbar + e * (x0 - xbar);
        out.states.push_back({x(0), x(1)});
    }
    return out;
}

double pair_joint_stationary(int n, double q12, double q21, double lambda) {
    if (n < 2) throw ValidationError("pair stationary: need N >= 2");
    if (!(q12 > 0.0) || !(q21 > 0.0) || lambda < 0.0)
        throw ValidationError("pair stationary: invalid parameters");
    const double q = q12 + q21;
    return q21 * (lambda + q21 * (n - 1)) / (q * (lambda + q * (n - 1)));
}

} // namespace opinet
