#include "rmdp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rmdp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Absolute outward rounding applied to every reach bound.
constexpr double kOutward = 1e-12;

Interval inflate(Interval i) { return {i.lo - kOutward, i.hi + kOutward}; }

bool contains_point_of(double a, double b, double offset) {
    // is there an integer k with offset + 2 k pi in [a, b]?
    const double k = std::ceil((a - offset) / kTwoPi);
    return offset + k * kTwoPi <= b;
}

}  // namespace

Box::Box(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw DomainError("box bounds differ in dimension");
}

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator*(Interval a, Interval b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval cos_range(Interval t) {
    if (t.width() >= kTwoPi) return {-1.0, 1.0};
    const double ca = std::cos(t.lo);
    const double cb = std::cos(t.hi);
    Interval r{std::min(ca, cb), std::max(ca, cb)};
    if (contains_point_of(t.lo, t.hi, 0.0)) r.hi = 1.0;
    if (contains_point_of(t.lo, t.hi, kPi)) r.lo = -1.0;
    return r;
}

Interval sin_range(Interval t) {
    if (t.width() >= kTwoPi) return {-1.0, 1.0};
    const double sa = std::sin(t.lo);
    const double sb = std::sin(t.hi);
    Interval r{std::min(sa, sb), std::max(sa, sb)};
    if (contains_point_of(t.lo, t.hi, 0.5 * kPi)) r.hi = 1.0;
    if (contains_point_of(t.lo, t.hi, -0.5 * kPi)) r.lo = -1.0;
    return r;
}

Eigen::VectorXd step_sample(const ParametricSystem& sys, const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& p, std::mt19937_64& eng) {
    Eigen::VectorXd next = sys.mean(s, u, p);
    const Eigen::VectorXd sigma = sys.noise_std();
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index d = 0; d < next.size(); ++d)
        if (sigma[d] > 0.0) next[d] += sigma[d] * gauss(eng);
    return sys.wrap(std::move(next));
}

Eigen::VectorXd step_sample(const ParametricSystem& sys, const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& p, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    return step_sample(sys, s, u, p, eng);
}

double DubinsParams::noise_sigma() const {
    return noise_reading == NoiseReading::variance ? std::sqrt(noise) : noise;
}

Box DubinsParams::parameter_box() const {
    return {Eigen::Vector2d(alpha_lo, beta_lo), Eigen::Vector2d(alpha_hi, beta_hi)};
}

void DubinsParams::validate() const {
    if (!(delta > 0.0)) throw DomainError("time step must be positive");
    if (!(alpha_lo <= alpha_hi)) throw DomainError("alpha bounds reversed");
    if (!(beta_lo <= beta_hi)) throw DomainError("beta bounds reversed");
    if (!(noise > 0.0)) throw DomainError("noise parameter must be positive");
    if (!(steer_lo <= steer_hi) || !(accel_lo <= accel_hi)) throw DomainError("input bounds reversed");
    if (!(speed_lo <= speed_hi)) throw DomainError("speed bounds reversed");
}

double wrap_angle(double theta) {
    double w = theta - kTwoPi * std::floor((theta + kPi) / kTwoPi);
    if (w >= kPi) w -= kTwoPi;
    if (w < -kPi) w = -kPi;
    return w;
}

DubinsSystem::DubinsSystem(DubinsParams params) : p_(params) { p_.validate(); }

Box DubinsSystem::input_bounds() const {
    return {Eigen::Vector2d(p_.steer_lo, p_.accel_lo), Eigen::Vector2d(p_.steer_hi, p_.accel_hi)};
}

Eigen::VectorXd DubinsSystem::noise_std() const { return Eigen::Vector4d(0.0, 0.0, p_.delta * p_.noise_sigma(), 0.0); }

Eigen::VectorXd DubinsSystem::periods() const { return Eigen::Vector4d(0.0, 0.0, kTwoPi, 0.0); }

void DubinsSystem::check_input(const Eigen::VectorXd& u) const {
    if (u.size() != 2) throw DomainError("Dubins input must be (u, u')");
    const Box b = input_bounds();
    if ((u.array() < b.lo.array() - 1e-12).any() || (u.array() > b.hi.array() + 1e-12).any())
        throw DomainError("input outside its bounds");
}

Eigen::VectorXd DubinsSystem::mean(const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& p) const {
    check_input(u);
    if (s.size() != 4 || p.size() != 2) throw DomainError("Dubins state is 4D and parameters are (alpha, beta)");
    const double V = s[kV];
    Eigen::VectorXd n(4);
    n[kX] = s[kX] + p_.delta * V * std::cos(s[kTheta]);
    n[kY] = s[kY] + p_.delta * V * std::sin(s[kTheta]);
    n[kTheta] = wrap_angle(s[kTheta] + p_.delta * p[0] * u[0]);
    n[kV] = p[1] * V + p_.delta * u[1];
    if (p_.clamp == ClampPolicy::clamp) n[kV] = std::clamp(n[kV], p_.speed_lo, p_.speed_hi);
    return n;
}

Box DubinsSystem::reach(const Box& cell, const Eigen::VectorXd& u, const Box& params) const {
    check_input(u);
    if (cell.dim() != 4 || params.dim() != 2) throw DomainError("Dubins cells are 4D and parameter boxes 2D");
    const Interval theta{cell.lo[kTheta], cell.hi[kTheta]};
    if (theta.width() > kTwoPi) throw DomainError("theta interval wider than 2*pi");
    const Interval x{cell.lo[kX], cell.hi[kX]};
    const Interval y{cell.lo[kY], cell.hi[kY]};
    const Interval V{cell.lo[kV], cell.hi[kV]};
    const Interval alpha{params.lo[0], params.hi[0]};
    const Interval beta{params.lo[1], params.hi[1]};

    const Interval nx = inflate(x + (V * cos_range(theta)).scaled(p_.delta));
    const Interval ny = inflate(y + (V * sin_range(theta)).scaled(p_.delta));
    const Interval nt = inflate(theta + (alpha.scaled(u[0])).scaled(p_.delta));
    Interval nv = inflate(beta * V + Interval{p_.delta * u[1], p_.delta * u[1]});
    if (p_.clamp == ClampPolicy::clamp)
        nv = {std::clamp(nv.lo, p_.speed_lo, p_.speed_hi), std::clamp(nv.hi, p_.speed_lo, p_.speed_hi)};

    return {Eigen::Vector4d(nx.lo, ny.lo, nt.lo, nv.lo), Eigen::Vector4d(nx.hi, ny.hi, nt.hi, nv.hi)};
}

Eigen::VectorXd DubinsSystem::wrap(Eigen::VectorXd s) const {
    s[kTheta] = wrap_angle(s[kTheta]);
    return s;
}

StateVec step_mean(const DubinsParams& params, const StateVec& s, const Eigen::Vector2d& u, const Eigen::Vector2d& p) {
    return DubinsSystem(params).mean(s, u, p);
}

Box reach_box(const DubinsParams& params, const Box& cell, const Eigen::Vector2d& u, const Box& param_box) {
    return DubinsSystem(params).reach(cell, u, param_box);
}

}  // namespace rmdp
