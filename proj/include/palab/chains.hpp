#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

namespace palab {

/// Rate function n -> value, limited to the CLI-expressible forms:
/// `c`, `c*n^-a`, `c*(1+1/n)`.
struct RateExpr {
    enum class Form { Constant, PowerLaw, Harmonic };

    Form form = Form::Constant;
    double c = 0.0;
    double a = 0.0;  // PowerLaw exponent

    double operator()(double n) const {
        switch (form) {
            case Form::Constant: return c;
            case Form::PowerLaw: return c * std::pow(n, -a);
            case Form::Harmonic: return c * (1.0 + 1.0 / n);
        }
        return c;
    }

    static RateExpr constant(double c) { return {Form::Constant, c, 0.0}; }
    static RateExpr power_law(double c, double a) { return {Form::PowerLaw, c, a}; }
    static RateExpr harmonic(double c) { return {Form::Harmonic, c, 0.0}; }

    /// Accepts "0.3", "2*n^-0.5", "1.5*(1+1/n)".
    static RateExpr parse(const std::string& text) {
        auto fail = [&]() -> RateExpr {
            throw std::invalid_argument("rate expression not in {c, c*n^-a, c*(1+1/n)}: " + text);
        };
        std::string s;
        for (char ch : text)
            if (!std::isspace((unsigned char)ch)) s += ch;
        std::size_t star = s.find('*');
        try {
            if (star == std::string::npos) {
                std::size_t used = 0;
                double c = std::stod(s, &used);
                if (used != s.size()) return fail();
                return constant(c);
            }
            double c = std::stod(s.substr(0, star));
            std::string rest = s.substr(star + 1);
            if (rest == "(1+1/n)") return harmonic(c);
            if (rest.rfind("n^-", 0) == 0) {
                std::size_t used = 0;
                std::string exp = rest.substr(3);
                double a = std::stod(exp, &used);
                if (used != exp.size()) return fail();
                return power_law(c, a);
            }
        } catch (const std::exception&) {
            return fail();
        }
        return fail();
    }

    std::string str() const {
        switch (form) {
            case Form::Constant: return std::to_string(c);
            case Form::PowerLaw: return std::to_string(c) + "*n^-" + std::to_string(a);
            case Form::Harmonic: return std::to_string(c) + "*(1+1/n)";
        }
        return {};
    }
};

// --- martingale counter ----------------------------------------------------

struct MartingaleConfig {
    RateExpr p;  // up-step probability p(n)
    int K = 1;
    int m = 1;
    long steps = 1000;
    std::uint64_t seed = 0;
    double initial = 0.0;
};

/// Trajectory M[i] = M_{i+1} (so M[0] is the start at n = 1) and the
/// compensator mu with mu_{n+1} = mu_n + (n+1)_s p(n), s = K m.
struct MartingaleResult {
    std::vector<double> M;
    std::vector<double> mu;
    int s = 1;
};

inline double falling_factorial(double n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (n - i);
    return r;
}

inline MartingaleResult simulate_martingale(const MartingaleConfig& cfg) {
    if (cfg.K < 1 || cfg.m < 1)
        throw std::invalid_argument("simulate_martingale: K and m must be positive integers");
    MartingaleResult out;
    out.s = cfg.K * cfg.m;
    out.M.reserve(cfg.steps + 1);
    out.mu.reserve(cfg.steps + 1);
    out.M.push_back(cfg.initial);
    out.mu.push_back(0.0);
    Rng rng(cfg.seed);
    double M = cfg.initial;
    double mu = 0.0;
    for (long n = 1; n <= cfg.steps; ++n) {
        double up = cfg.p((double)n);
        double down = cfg.K * M / (double)(n + 1);
        if (down < 0.0) down = 0.0;
        if (up < 0.0 || up > 1.0)
            throw std::runtime_error("simulate_martingale: p(n) outside [0,1] at step " +
                                     std::to_string(n));
        if (up + down > 1.0)
            throw std::runtime_error(
                "simulate_martingale: probability overflow p(n) + K M_n/(n+1) > 1 at step " +
                std::to_string(n));
        double u = rng.uniform();
        if (u < up) M += 1.0;
        else if (u < up + down) M -= cfg.m;
        mu += falling_factorial((double)(n + 1), out.s) * up;
        out.M.push_back(M);
        out.mu.push_back(mu);
    }
    return out;
}

// --- slow birth-death chain --------------------------------------------------

struct SlowChainConfig {
    RateExpr rho;
    RateExpr tau;
    long steps = 100000;
    std::uint64_t seed = 0;
    double suffix_fraction = 0.5;  // occupancy measured over the trajectory tail
    long initial_state = 0;
};

struct Occupancy {
    std::map<long, double> freq;  // sums to 1
    long steps_counted = 0;
    long final_state = 0;
};

/// The conditioned chain W_n: from i >= 1 down with probability
/// tau(n) i / (tau(n) i + rho(n)), up otherwise; W_n(0,1) = 1.
inline Occupancy simulate_slow_chain(const SlowChainConfig& cfg) {
    if (cfg.steps < 1) throw std::invalid_argument("simulate_slow_chain: steps must be >= 1");
    if (!(cfg.suffix_fraction > 0.0 && cfg.suffix_fraction <= 1.0))
        throw std::invalid_argument("simulate_slow_chain: suffix fraction must be in (0,1]");
    Rng rng(cfg.seed);
    long state = cfg.initial_state;
    long from = cfg.steps - (long)(cfg.suffix_fraction * cfg.steps) + 1;
    std::map<long, long> visits;
    long counted = 0;
    for (long n = 1; n <= cfg.steps; ++n) {
        double rho = cfg.rho((double)n);
        double tau = cfg.tau((double)n);
        if (!(rho > 0.0) || !(tau > 0.0))
            throw std::runtime_error("simulate_slow_chain: rates must stay positive");
        if (state == 0) {
            state = 1;
        } else {
            double down = tau * state / (tau * state + rho);
            state += rng.uniform() < down ? -1 : +1;
        }
        if (n >= from) {
            ++visits[state];
            ++counted;
        }
    }
    Occupancy occ;
    occ.steps_counted = counted;
    occ.final_state = state;
    for (const auto& [s, c] : visits) occ.freq[s] = (double)c / (double)counted;
    return occ;
}

/// Stationary law of the limit chain: numeric birth-death balance recursion
/// against the closed form pi_n = (n+lambda) lambda^{n-1} / (2 e^lambda n!).
/// Both are returned with their total-variation gap; the closed form holds
/// for all n >= 0, while the recurrence-seed candidate 1/(1+lambda) is
/// reported without being asserted.
struct StationaryResult {
    std::vector<double> numeric;
    std::vector<double> closed_form;
    double tv_gap = 0.0;
    double balance_residual = 0.0;
    double pi0_numeric = 0.0;
    double pi0_closed_form = 0.0;
    double pi0_recurrence_candidate = 0.0;  // 1/(1+rho/tau)
};

inline StationaryResult stationary_birth_death(double rho, double tau, int cutoff = 0) {
    if (!(rho > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("stationary_birth_death: rates must be positive");
    double lambda = rho / tau;
    auto up = [&](long i) { return i == 0 ? 1.0 : rho / (tau * i + rho); };
    auto down = [&](long i) { return tau * i / (tau * i + rho); };

    std::vector<double> unnorm{1.0};
    double total = 1.0;
    int n = 0;
    for (;;) {
        double next = unnorm.back() * up(n) / down(n + 1);
        unnorm.push_back(next);
        total += next;
        ++n;
        if (cutoff > 0 && n >= cutoff) break;
        if (cutoff == 0 && next < 1e-14 * total && n >= 10) break;
        if (n > 100000)
            throw std::runtime_error("stationary_birth_death: normalization did not converge");
    }
    StationaryResult out;
    out.numeric.resize(unnorm.size());
    for (std::size_t i = 0; i < unnorm.size(); ++i) out.numeric[i] = unnorm[i] / total;

    out.closed_form.resize(unnorm.size());
    double t = 1.0 / lambda;  // lambda^{n-1}/n! at n = 0
    double z = 2.0 * std::exp(lambda);
    for (std::size_t i = 0; i < out.closed_form.size(); ++i) {
        out.closed_form[i] = ((double)i + lambda) * t / z;
        t *= lambda / (double)(i + 1);
    }

    double tv = 0.0;
    for (std::size_t i = 0; i < out.numeric.size(); ++i)
        tv += std::abs(out.numeric[i] - out.closed_form[i]);
    out.tv_gap = 0.5 * tv;

    // Global balance residual of the numeric solution.
    double res = 0.0;
    for (std::size_t i = 0; i < out.numeric.size(); ++i) {
        double inflow = 0.0;
        if (i >= 1) inflow += out.numeric[i - 1] * up((long)i - 1);
        if (i + 1 < out.numeric.size()) inflow += out.numeric[i + 1] * down((long)i + 1);
        if (i + 1 == out.numeric.size()) continue;  // truncated boundary
        res = std::max(res, std::abs(inflow - out.numeric[i]));
    }
    out.balance_residual = res;
    out.pi0_numeric = out.numeric[0];
    out.pi0_closed_form = out.closed_form[0];
    out.pi0_recurrence_candidate = 1.0 / (1.0 + lambda);
    return out;
}

// --- oscillating two-state counterexample -----------------------------------

/// Exact distribution evolution for the inhomogeneous two-state chain whose
/// transition matrices converge to the identity while the distribution keeps
/// oscillating. Block on (2^{2k-1}, 2^{2k}] pushes mass from state 1 to 2,
/// the complementary blocks push back.
struct OscillatorResult {
    std::vector<std::pair<long, std::array<double, 2>>> block_ends;  // (n = 2^j, distribution)
    double max_n_times_norm = 0.0;  // sup_n n * ||P_n - I||_inf, rows summed without |.|
    double max_abs_row_gap = 0.0;   // sup_n |row sum of P_n - 1|
};

inline OscillatorResult oscillator_demo(long steps) {
    if (steps < 4) throw std::invalid_argument("oscillator_demo: steps must be >= 4");
    OscillatorResult out;
    std::array<double, 2> x{1.0, 0.0};
    long block_end = 4;  // first block is (2, 4]
    bool push_down = true;  // state 1 -> state 2 on blocks ending at 2^{2k}
    for (long n = 3; n <= steps; ++n) {
        double q = 1.0 / (double)n;
        std::array<std::array<double, 2>, 2> P;
        if (push_down) P = {{{1.0 - q, q}, {0.0, 1.0}}};
        else P = {{{1.0, 0.0}, {q, 1.0 - q}}};
        x = {x[0] * P[0][0] + x[1] * P[1][0], x[0] * P[0][1] + x[1] * P[1][1]};

        // ||P_n - I||_inf with the row sums taken literally: both rows cancel.
        double norm = std::max((P[0][0] - 1.0) + P[0][1], P[1][0] + (P[1][1] - 1.0));
        out.max_n_times_norm = std::max(out.max_n_times_norm, (double)n * norm);
        out.max_abs_row_gap =
            std::max({out.max_abs_row_gap, std::abs(P[0][0] + P[0][1] - 1.0),
                      std::abs(P[1][0] + P[1][1] - 1.0)});

        if (n == block_end) {
            out.block_ends.emplace_back(n, x);
            block_end *= 2;
            push_down = !push_down;
        }
    }
    return out;
}

/// Component-1 mass recorded at n = 2^j, for tests against the dyadic
/// oscillation claim.
inline std::map<long, double> oscillator_mass1(const OscillatorResult& r) {
    std::map<long, double> out;
    for (const auto& [n, x] : r.block_ends) out[n] = x[0];
    return out;
}

}  // namespace palab
