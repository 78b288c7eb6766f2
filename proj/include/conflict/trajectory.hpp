#pragma once

// Deterministic recurrences that drive the wasteful colouring procedure.
//
// With a = √2 + ε/2 and x = εe^{-ε}:
//   K    = a² / (1 + x/20) · ln(1 + x/10)
//   β    = 1/2 − (1/2)((ε + 4)/(ε + 5))²
//   L_0  = a √(Δ / ln Δ),   T_0 = √(Δ ln Δ) / a
//   Keep_i    = (1 − K(1 + x/30) / (L_i ln Δ))^{T_i}
//   L_{i+1}   = L_i Keep_i − L_i^{1−β/2}
//   T_{i+1}   = T_i (1 − (K/ln Δ) Keep_i) Keep_i + T_i^{1−β/2}
//   L'_{i+1}  = L'_i Keep_i,  T'_{i+1} = T'_i (1 − (K/ln Δ) Keep_i) Keep_i
// Keep_i is always taken from the unprimed pair.
//
// All arithmetic is double precision. Δ is carried as ln Δ so that the
// asymptotic regime (Δ far beyond any graph one could build) can be explored.

#include "conflict/errors.hpp"

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace conflict {

struct TheoryParams {
    double delta = 0;     ///< Δ (may be +inf when only ln Δ is representable)
    double log_delta = 0; ///< ln Δ
    double epsilon = 0;
    double K = 0;
    double beta = 0;
    double L0 = 0;
    double T0 = 0;

    /// √2 + ε/2
    double list_coefficient() const { return std::sqrt(2.0) + epsilon / 2.0; }
    /// εe^{-ε}
    double small_term() const { return epsilon * std::exp(-epsilon); }
    /// K / ln Δ, the activation probability.
    double activation_probability() const { return K / log_delta; }
    /// Δ^{½ε²/(ε+4)²}: lower limit for L_i and T_i while the recurrences apply.
    double size_floor() const
    {
        return std::exp(log_delta * 0.5 * epsilon * epsilon / ((epsilon + 4.0) * (epsilon + 4.0)));
    }
    /// Pruning threshold on t_0(v, c); equals T_0.
    double prune_threshold() const { return T0; }
    /// Lower bound on every Keep_i: exp(−K(1 + x/20) / a²).
    double keep_lower_bound() const
    {
        const double a = list_coefficient();
        return std::exp(-K * (1.0 + small_term() / 20.0) / (a * a));
    }
    /// Upper bound on Keep_i while T_i ≥ L_i/8: 1 − K/(10 ln Δ).
    double keep_upper_bound() const { return 1.0 - K / (10.0 * log_delta); }
    /// î = (2 / (K c)) ln Δ ln ln Δ with c the Keep lower bound.
    double i_hat() const { return 2.0 / (K * keep_lower_bound()) * log_delta * std::log(log_delta); }
};

inline TheoryParams params_from_log_delta(double log_delta, double epsilon)
{
    if (!(log_delta > 0))
        throw ParameterError("ln(delta) must be positive");
    if (!(epsilon > 0))
        throw ParameterError("epsilon must be positive");
    TheoryParams p;
    p.log_delta = log_delta;
    p.delta = std::exp(log_delta);
    p.epsilon = epsilon;
    const double a = p.list_coefficient();
    const double x = p.small_term();
    p.K = a * a / (1.0 + x / 20.0) * std::log1p(x / 10.0);
    const double ratio = (epsilon + 4.0) / (epsilon + 5.0);
    p.beta = 0.5 - 0.5 * ratio * ratio;
    // √(Δ/lnΔ) and √(ΔlnΔ) via logs so huge Δ stays finite
    p.L0 = a * std::exp(0.5 * (log_delta - std::log(log_delta)));
    p.T0 = std::exp(0.5 * (log_delta + std::log(log_delta))) / a;
    return p;
}

inline TheoryParams compute_params(double delta, double epsilon)
{
    if (!(delta >= 3))
        throw ParameterError("delta must be at least 3");
    auto p = params_from_log_delta(std::log(delta), epsilon);
    p.delta = delta;
    return p;
}

/// Keep_i for a (L, T) pair. Throws PreconditionError when the base of the
/// power is not positive.
inline double keep_i(double L, double T, const TheoryParams & p)
{
    const double x = p.K * (1.0 + p.small_term() / 30.0) / (L * p.log_delta);
    if (!(L > 0) || !(x < 1.0))
        throw PreconditionError("Keep base is not positive (L = " + std::to_string(L) + ")");
    if (T == 0)
        return 1.0;
    return std::exp(T * std::log1p(-x));
}

struct StepResult {
    double L;
    double T;
};

inline StepResult step(double L, double T, const TheoryParams & p)
{
    const double keep = keep_i(L, T, p);
    const double exponent = 1.0 - p.beta / 2.0;
    return {L * keep - std::pow(L, exponent),
        T * (1.0 - p.activation_probability() * keep) * keep + std::pow(T, exponent)};
}

inline StepResult step_primed(double Lp, double Tp, double keep, const TheoryParams & p)
{
    return {Lp * keep, Tp * (1.0 - p.activation_probability() * keep) * keep};
}

struct TrajectoryRow {
    std::size_t i;
    double L;
    double T;
    double Lp;
    double Tp;
    double keep; ///< NaN when the base of Keep is not positive
    double ratio;
};

enum class TrajectoryOutcome { stop, breakdown, row_limit };

inline const char * to_string(TrajectoryOutcome o)
{
    switch (o) {
    case TrajectoryOutcome::stop: return "stop";
    case TrajectoryOutcome::breakdown: return "breakdown";
    case TrajectoryOutcome::row_limit: return "row_limit";
    }
    return "?";
}

struct Trajectory {
    std::vector<TrajectoryRow> rows;
    TrajectoryOutcome outcome = TrajectoryOutcome::breakdown;
    std::optional<std::size_t> i_star;
    double i_hat = 0;
};

/// Iterate until T_i < L_i/8 (stop) or min(L_i, T_i) drops below the size
/// floor (breakdown). The last row is the terminal one.
inline Trajectory run_trajectory(const TheoryParams & p, std::size_t max_rows = 10'000'000)
{
    Trajectory traj;
    traj.i_hat = p.i_hat();
    double L = p.L0, T = p.T0, Lp = p.L0, Tp = p.T0;
    const double floor_value = p.size_floor();
    for (std::size_t i = 0;; ++i) {
        TrajectoryRow row{i, L, T, Lp, Tp, std::nan(""), T / L};
        try {
            row.keep = keep_i(L, T, p);
        }
        catch (const PreconditionError &) {
        }
        traj.rows.push_back(row);

        if (T < L / 8.0) {
            traj.outcome = TrajectoryOutcome::stop;
            traj.i_star = i;
            return traj;
        }
        if (!(std::min(L, T) >= floor_value) || std::isnan(row.keep)) {
            traj.outcome = TrajectoryOutcome::breakdown;
            return traj;
        }
        if (traj.rows.size() >= max_rows) {
            traj.outcome = TrajectoryOutcome::row_limit;
            return traj;
        }
        const double exponent = 1.0 - p.beta / 2.0;
        const double drift = 1.0 - p.activation_probability() * row.keep;
        const double nextL = L * row.keep - std::pow(L, exponent);
        const double nextT = T * drift * row.keep + std::pow(T, exponent);
        Lp = Lp * row.keep;
        Tp = Tp * drift * row.keep;
        L = nextL;
        T = nextT;
    }
}

/// Whether (Δ, ε, D, list size) lie in the regime the constants are built for:
/// D ≤ Δ^{¼ε²/(ε+5)²} and list_size ≥ (2√2 + ε)√(Δ / ln Δ).
inline bool check_regime(double delta, double epsilon, double conflict_degree, double list_size)
{
    if (!(delta > 1) || !(epsilon > 0))
        return false;
    const double ld = std::log(delta);
    const double d_cap = std::exp(ld * 0.25 * epsilon * epsilon / ((epsilon + 5.0) * (epsilon + 5.0)));
    const double list_need = (2.0 * std::sqrt(2.0) + epsilon) * std::sqrt(delta / ld);
    return conflict_degree <= d_cap && list_size >= list_need;
}

/// Numerical verdicts of the recurrence bounds on one trajectory. Each
/// `first_*` field holds the first offending row, if any.
struct BoundsReport {
    bool ratio_decreasing = true; ///< T_i/L_i < T_{i−1}/L_{i−1}
    std::optional<std::size_t> first_ratio_violation;
    bool keep_bounds = true; ///< lower ≤ Keep_i ≤ 1 − K/(10 ln Δ), lower ≥ 1/2
    std::optional<std::size_t> first_keep_violation;
    bool primed_close = true; ///< |L − L'| ≤ L'^{1−β/4}, same for T
    std::optional<std::size_t> first_primed_violation;
    bool stop_within_i_hat = true; ///< i* ≤ î when stop occurs
    bool keep_lower_at_least_half = true;

    bool all() const
    {
        return ratio_decreasing && keep_bounds && primed_close && stop_within_i_hat && keep_lower_at_least_half;
    }
};

/// Rows other than the terminal one satisfy every hypothesis of the bounds, since
/// the run stops at the first stop or breakdown row. Inequalities are checked
/// with `rel_tol` relative slack.
inline BoundsReport check_recurrence_bounds(const Trajectory & traj, const TheoryParams & p, double rel_tol = 1e-9)
{
    BoundsReport r;
    const double lo = p.keep_lower_bound();
    const double hi = p.keep_upper_bound();
    r.keep_lower_at_least_half = lo >= 0.5 * (1.0 - rel_tol);
    const double exponent = 1.0 - p.beta / 4.0;
    const auto & rows = traj.rows;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto & row = rows[k];
        if (k > 0 && r.ratio_decreasing) {
            const double prev = rows[k - 1].ratio;
            if (!(row.ratio < prev + rel_tol * std::abs(prev))) {
                r.ratio_decreasing = false;
                r.first_ratio_violation = row.i;
            }
        }
        const bool terminal = k + 1 == rows.size();
        if (!terminal && r.keep_bounds) {
            const bool ok = row.keep >= lo * (1.0 - rel_tol) && row.keep <= hi * (1.0 + rel_tol);
            if (!ok) {
                r.keep_bounds = false;
                r.first_keep_violation = row.i;
            }
        }
        if (r.primed_close) {
            const bool okL = std::abs(row.L - row.Lp) <= std::pow(row.Lp, exponent) * (1.0 + rel_tol);
            const bool okT = std::abs(row.T - row.Tp) <= std::pow(row.Tp, exponent) * (1.0 + rel_tol);
            if (!okL || !okT) {
                r.primed_close = false;
                r.first_primed_violation = row.i;
            }
        }
    }
    if (traj.i_star)
        r.stop_within_i_hat = static_cast<double>(*traj.i_star) <= traj.i_hat * (1.0 + rel_tol);
    return r;
}

inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_trajectory_csv(std::ostream & out, const Trajectory & traj)
{
    out << "i,L,T,Lp,Tp,Keep,ratio\n";
    for (const auto & row : traj.rows)
        out << row.i << ',' << format_double(row.L) << ',' << format_double(row.T) << ',' << format_double(row.Lp)
            << ',' << format_double(row.Tp) << ',' << format_double(row.keep) << ',' << format_double(row.ratio)
            << '\n';
}

} // namespace conflict
