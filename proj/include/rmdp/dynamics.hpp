#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmdp/finite_model.hpp"

namespace rmdp {

/// Axis-aligned box [lo, hi] in R^n.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    Box() = default;
    Box(Eigen::VectorXd l, Eigen::VectorXd h);
    static Box point(const Eigen::VectorXd& p) { return {p, p}; }

    [[nodiscard]] Eigen::Index dim() const { return lo.size(); }
    [[nodiscard]] Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
    [[nodiscard]] Eigen::VectorXd width() const { return hi - lo; }
    [[nodiscard]] bool contains(const Eigen::VectorXd& p) const {
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    }
    [[nodiscard]] bool contains(const Box& b) const {
        return (b.lo.array() >= lo.array()).all() && (b.hi.array() <= hi.array()).all();
    }
};

/// Closed real interval with the few operations the reach computation needs.
struct Interval {
    double lo;
    double hi;

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] bool contains(double v) const { return lo <= v && v <= hi; }
    [[nodiscard]] Interval scaled(double c) const { return c >= 0 ? Interval{c * lo, c * hi} : Interval{c * hi, c * lo}; }
};

Interval operator+(Interval a, Interval b);
Interval operator*(Interval a, Interval b);
/// Exact ranges of cos and sin over an interval, with extrema at crossings of
/// multiples of pi/2.
Interval cos_range(Interval t);
Interval sin_range(Interval t);

/// Continuous-state parametric stochastic system: next = mean(s, u, p) + noise,
/// with independent zero-mean Gaussian noise per dimension (sigma 0 allowed).
/// Periodic dimensions live on [domain_lo, domain_lo + period).
class ParametricSystem {
public:
    virtual ~ParametricSystem() = default;

    [[nodiscard]] virtual int state_dim() const = 0;
    [[nodiscard]] virtual int input_dim() const = 0;
    [[nodiscard]] virtual std::vector<std::string> state_names() const = 0;
    [[nodiscard]] virtual std::vector<std::string> input_names() const = 0;
    [[nodiscard]] virtual Box input_bounds() const = 0;
    /// Per-dimension noise standard deviation on the next state.
    [[nodiscard]] virtual Eigen::VectorXd noise_std() const = 0;
    /// Period of each dimension, 0 when not periodic.
    [[nodiscard]] virtual Eigen::VectorXd periods() const = 0;

    /// Noiseless next state for concrete parameters (wrapped on periodic dims).
    [[nodiscard]] virtual Eigen::VectorXd mean(const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                                               const Eigen::VectorXd& p) const = 0;
    /// Sound enclosure of mean(s, u, p) over s in cell and p in params. Periodic
    /// dimensions are returned unwrapped.
    [[nodiscard]] virtual Box reach(const Box& cell, const Eigen::VectorXd& u, const Box& params) const = 0;
    /// Maps periodic coordinates into their canonical range.
    [[nodiscard]] virtual Eigen::VectorXd wrap(Eigen::VectorXd s) const = 0;
};

/// Sample next state: mean plus Gaussian noise, wrapped.
Eigen::VectorXd step_sample(const ParametricSystem& sys, const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& p, std::mt19937_64& eng);
Eigen::VectorXd step_sample(const ParametricSystem& sys, const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& p, std::uint64_t seed);

enum class NoiseReading { variance, std_dev };
enum class ClampPolicy { clamp, none };

/// Dubins vehicle with steering sensitivity alpha and drag beta:
///   x'     = x + delta * V cos(theta)
///   y'     = y + delta * V sin(theta)
///   theta' = theta + delta * (alpha * u + w),  w ~ N(0, noise)
///   V'     = beta * V + delta * u'
/// The noise parameter is a variance by default; `noise_reading` selects the
/// standard-deviation reading instead.
struct DubinsParams {
    double delta = 0.5;
    double alpha_lo = 0.8;
    double alpha_hi = 0.9;
    double beta_lo = 0.8;
    double beta_hi = 0.9;
    double noise = 0.1;
    NoiseReading noise_reading = NoiseReading::variance;
    double steer_lo = -0.5 * 3.14159265358979323846;
    double steer_hi = 0.5 * 3.14159265358979323846;
    double accel_lo = -5.0;
    double accel_hi = 5.0;
    double speed_lo = -3.0;
    double speed_hi = 3.0;
    ClampPolicy clamp = ClampPolicy::clamp;

    /// Standard deviation of w.
    [[nodiscard]] double noise_sigma() const;
    [[nodiscard]] Box parameter_box() const;
    /// Throws DomainError on violated invariants.
    void validate() const;
};

using StateVec = Eigen::Vector4d;
enum DubinsDim : int { kX = 0, kY = 1, kTheta = 2, kV = 3 };

/// Wraps an angle to [-pi, pi).
double wrap_angle(double theta);

class DubinsSystem final : public ParametricSystem {
public:
    explicit DubinsSystem(DubinsParams params);

    [[nodiscard]] const DubinsParams& params() const { return p_; }

    [[nodiscard]] int state_dim() const override { return 4; }
    [[nodiscard]] int input_dim() const override { return 2; }
    [[nodiscard]] std::vector<std::string> state_names() const override { return {"x", "y", "theta", "V"}; }
    [[nodiscard]] std::vector<std::string> input_names() const override { return {"u", "u_prime"}; }
    [[nodiscard]] Box input_bounds() const override;
    [[nodiscard]] Eigen::VectorXd noise_std() const override;
    [[nodiscard]] Eigen::VectorXd periods() const override;
    [[nodiscard]] Eigen::VectorXd mean(const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& p) const override;
    [[nodiscard]] Box reach(const Box& cell, const Eigen::VectorXd& u, const Box& params) const override;
    [[nodiscard]] Eigen::VectorXd wrap(Eigen::VectorXd s) const override;

private:
    void check_input(const Eigen::VectorXd& u) const;
    DubinsParams p_;
};

/// Deterministic part of the Dubins step for concrete (alpha, beta).
StateVec step_mean(const DubinsParams& params, const StateVec& s, const Eigen::Vector2d& u, const Eigen::Vector2d& p);

/// Interval enclosure of step_mean over a cell and a parameter box.
Box reach_box(const DubinsParams& params, const Box& cell, const Eigen::Vector2d& u, const Box& param_box);

}  // namespace rmdp
