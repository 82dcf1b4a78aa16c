#include "rsl/tailfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rsl/errors.hpp"
#include "rsl/kernels.hpp"

namespace rsl {
namespace {

constexpr double k_gamma_lo = 1.01;
constexpr double k_gamma_hi = 10.0;
constexpr double k_inf = std::numeric_limits<double>::infinity();

// Run-length histogram with suffix aggregates, so every k_min candidate in a
// scan reads its tail size and sum-of-logs in O(1).
struct Histogram {
    std::vector<std::uint32_t> values;  // ascending, distinct
    std::vector<std::uint64_t> counts;
    std::vector<std::uint64_t> suffix_n;
    std::vector<double> suffix_wlog;  // sum of count * ln(value) over [i..)
    std::uint64_t total = 0;
};

Histogram make_histogram(std::span<const std::uint32_t> degrees) {
    Histogram h;
    h.total = degrees.size();
    std::vector<std::uint32_t> sorted(degrees.begin(), degrees.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        h.values.push_back(sorted[i]);
        h.counts.push_back(j - i);
        i = j;
    }
    std::vector<double> logs(h.values.size(), 0.0);
    const std::size_t first_pos =
        h.values.empty() ? 0 : (h.values.front() == 0 ? 1 : 0);
    if (first_pos < h.values.size()) {
        std::vector<double> as_double(h.values.begin() + first_pos, h.values.end());
        kernels::log_array(as_double,
                           std::span<double>(logs).subspan(first_pos));
    }

    h.suffix_n.assign(h.values.size() + 1, 0);
    h.suffix_wlog.assign(h.values.size() + 1, 0.0);
    long double wlog = 0.0L;
    for (std::size_t i = h.values.size(); i-- > 0;) {
        h.suffix_n[i] = h.suffix_n[i + 1] + h.counts[i];
        wlog += static_cast<long double>(h.counts[i]) * logs[i];
        h.suffix_wlog[i] = static_cast<double>(wlog);
    }
    return h;
}

// Tail of a histogram from index `first`, modeled with threshold `k_min`
// (which may sit below the first observed value).
struct TailView {
    const Histogram* hist;
    std::size_t first;
    std::uint32_t k_min;
    std::uint64_t n;
    double sum_log;
};

TailView make_tail_view(const Histogram& h, std::size_t first, std::uint32_t k_min) {
    return TailView{&h, first, k_min, h.suffix_n[first], h.suffix_wlog[first]};
}

template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

struct PlInner {
    double gamma = 0.0;
    double ll = -k_inf;
    bool at_bound = false;
};

PlInner pl_fit_inner(const TailView& t) {
    const double n = static_cast<double>(t.n);
    const double mean_log = t.sum_log / n;
    const double k_min = static_cast<double>(t.k_min);
    auto neg_ll = [&](double gamma) {
        return gamma * mean_log + std::log(hurwitz_zeta(gamma, k_min));
    };
    const auto [gamma, f] = golden_min(neg_ll, k_gamma_lo, k_gamma_hi, 1e-9);
    PlInner r;
    r.gamma = gamma;
    r.ll = -f * n;
    r.at_bound = (gamma - k_gamma_lo < 1e-6) || (k_gamma_hi - gamma < 1e-6);
    return r;
}

// Two-sided KS between the tail's empirical CDF and the fitted power law.
// Dense ranges walk every integer in [k_min, max] with a vectorized power
// table; wide sparse ranges evaluate the exact model CDF only at observed
// values and the gap ends (where the sup must sit, both CDFs being
// monotone).
double pl_ks_inner(const TailView& t, double gamma) {
    const Histogram& h = *t.hist;
    const double z = hurwitz_zeta(gamma, static_cast<double>(t.k_min));
    const std::uint64_t vmax = h.values.back();
    const double n = static_cast<double>(t.n);
    double ks = 0.0;

    if (vmax - t.k_min < 65536) {
        constexpr std::size_t k_block = 4096;
        std::vector<double> pmf(k_block);
        double model_cdf = 0.0;
        std::uint64_t cum = 0;
        std::size_t vi = t.first;
        std::uint64_t k = t.k_min;
        while (k <= vmax) {
            const std::size_t len = static_cast<std::size_t>(
                std::min<std::uint64_t>(k_block, vmax - k + 1));
            kernels::pow_table(static_cast<std::uint32_t>(k), -gamma,
                               {pmf.data(), len});
            for (std::size_t j = 0; j < len; ++j, ++k) {
                model_cdf += pmf[j] / z;
                if (vi < h.values.size() && h.values[vi] == k) cum += h.counts[vi++];
                ks = std::max(ks, std::abs(static_cast<double>(cum) / n - model_cdf));
            }
        }
    } else {
        std::uint64_t cum = 0;
        for (std::size_t i = t.first; i < h.values.size(); ++i) {
            const double v = static_cast<double>(h.values[i]);
            const double pmf = std::pow(v, -gamma) / z;
            const double cdf = 1.0 - hurwitz_zeta(gamma, v + 1.0) / z;
            const double emp_below = static_cast<double>(cum) / n;
            cum += h.counts[i];
            const double emp_at = static_cast<double>(cum) / n;
            ks = std::max(ks, std::abs(emp_at - cdf));
            ks = std::max(ks, std::abs(emp_below - (cdf - pmf)));
        }
    }
    return std::min(ks, 1.0);
}

struct SeInner {
    double scale = 0.0;
    double shape = 0.0;
    double ll = -k_inf;
    bool converged = false;
};

struct Simplex2Result {
    std::array<double, 2> x{};
    double f = k_inf;
    bool converged = false;
};

// Nelder-Mead on two parameters. Objectives may return +inf outside their
// feasible box; the simplex contracts away from it.
template <typename F>
Simplex2Result nelder_mead2(F&& f, std::array<double, 2> x0, double step,
                            int max_iter) {
    std::array<std::array<double, 2>, 3> xs = {
        x0,
        {x0[0] + step, x0[1]},
        {x0[0], x0[1] + step},
    };
    std::array<double, 3> fs = {f(xs[0]), f(xs[1]), f(xs[2])};
    Simplex2Result result;
    for (int it = 0; it < max_iter; ++it) {
        std::array<int, 3> ord = {0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        const int lo = ord[0], mid = ord[1], hi = ord[2];

        const double fspread = fs[hi] - fs[lo];
        const double xspread =
            std::max(std::abs(xs[hi][0] - xs[lo][0]), std::abs(xs[hi][1] - xs[lo][1]));
        if (std::isfinite(fs[lo]) &&
            (fspread <= 1e-11 * (std::abs(fs[lo]) + 1e-9) || xspread <= 1e-10)) {
            result.converged = true;
            break;
        }

        const std::array<double, 2> c = {0.5 * (xs[lo][0] + xs[mid][0]),
                                         0.5 * (xs[lo][1] + xs[mid][1])};
        const std::array<double, 2> xr = {2.0 * c[0] - xs[hi][0],
                                          2.0 * c[1] - xs[hi][1]};
        const double fr = f(xr);
        if (fr < fs[lo]) {
            const std::array<double, 2> xe = {3.0 * c[0] - 2.0 * xs[hi][0],
                                              3.0 * c[1] - 2.0 * xs[hi][1]};
            const double fe = f(xe);
            if (fe < fr) {
                xs[hi] = xe;
                fs[hi] = fe;
            } else {
                xs[hi] = xr;
                fs[hi] = fr;
            }
        } else if (fr < fs[mid]) {
            xs[hi] = xr;
            fs[hi] = fr;
        } else {
            const std::array<double, 2> xc = {0.5 * (c[0] + xs[hi][0]),
                                              0.5 * (c[1] + xs[hi][1])};
            const double fc = f(xc);
            if (fc < fs[hi]) {
                xs[hi] = xc;
                fs[hi] = fc;
            } else {
                for (int i : {mid, hi}) {
                    xs[i] = {0.5 * (xs[i][0] + xs[lo][0]), 0.5 * (xs[i][1] + xs[lo][1])};
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    const int best =
        static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    result.x = xs[best];
    result.f = fs[best];
    return result;
}

SeInner se_fit_inner(const TailView& t) {
    const Histogram& h = *t.hist;
    long double sum_v = 0.0L;
    for (std::size_t i = t.first; i < h.values.size(); ++i)
        sum_v += static_cast<long double>(h.counts[i]) * h.values[i];
    const double mean_excess =
        static_cast<double>(sum_v) / static_cast<double>(t.n) -
        static_cast<double>(t.k_min);
    const double scale0 = std::max(mean_excess + 0.5, 0.5);

    const std::span<const std::uint32_t> values(h.values.data() + t.first,
                                                h.values.size() - t.first);
    const std::span<const std::uint64_t> counts(h.counts.data() + t.first,
                                                h.counts.size() - t.first);

    auto objective = [&](std::array<double, 2> x) {
        // x = (ln scale, ln shape); the box keeps the likelihood finite and
        // the shape away from the power-law-degenerate small-beta corner
        if (x[0] < -30.0 || x[0] > 30.0 || x[1] < std::log(0.5) ||
            x[1] > std::log(50.0))
            return k_inf;
        return -detail::stretched_exp_loglik(values, counts, t.k_min,
                                             std::exp(x[0]), std::exp(x[1]));
    };

    Simplex2Result best;
    for (double shape0 : {1.0, 0.5, 2.0}) {
        const Simplex2Result run =
            nelder_mead2(objective, {std::log(scale0), std::log(shape0)}, 0.5, 600);
        if (run.f < best.f) best = run;
    }
    if (!std::isfinite(best.f))
        throw NonConvergence("stretched-exponential fit found no finite likelihood");

    SeInner r;
    r.scale = std::exp(best.x[0]);
    r.shape = std::exp(best.x[1]);
    r.ll = -best.f;
    r.converged = best.converged;
    return r;
}

double bic(double log_likelihood, std::size_t n_params, std::uint64_t n) {
    return static_cast<double>(n_params) * std::log(static_cast<double>(n)) -
           2.0 * log_likelihood;
}

std::size_t first_index_at_least(const Histogram& h, std::uint32_t k_min) {
    return static_cast<std::size_t>(
        std::lower_bound(h.values.begin(), h.values.end(), k_min) - h.values.begin());
}

}  // namespace

const char* to_string(TailVerdict verdict) noexcept {
    switch (verdict) {
        case TailVerdict::power_law: return "power-law";
        case TailVerdict::stretched_exponential: return "stretched-exponential";
        default: return "inconclusive";
    }
}

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a >= 1.0))
        throw std::invalid_argument("hurwitz_zeta requires s > 1 and a >= 1");

    // Sum directly up to q >= 16, then the Euler-Maclaurin tail:
    //   zeta(s, q) ~ q^(1-s)/(s-1) + q^-s/2 + sum_j C_j (s)_(2j-1) q^(-s-2j+1)
    // with C_j = B_2j / (2j)!. Eight terms hold ~1e-13 relative error over
    // s in (1, 50].
    static constexpr double k_coeffs[8] = {
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -5.2841901386874932e-10,
        1.3382536530684679e-11,
        -3.3896802963225829e-13,
    };

    double acc = 0.0;
    double q = a;
    while (q < 16.0) {
        acc += std::pow(q, -s);
        q += 1.0;
    }
    const double qs = std::pow(q, -s);
    acc += qs * q / (s - 1.0);
    acc += 0.5 * qs;

    const double inv_q2 = 1.0 / (q * q);
    double qpow = qs / q;  // q^(-s-1)
    double poch = s;       // (s)(s+1)...(s+2j-2)
    for (int j = 1; j <= 8; ++j) {
        const double term = k_coeffs[j - 1] * poch * qpow;
        acc += term;
        if (std::abs(term) < 1e-16 * acc) break;
        qpow *= inv_q2;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    }
    return acc;
}

PowerLawFit fit_power_law_mle(std::span<const std::uint32_t> degrees,
                              std::uint32_t k_min) {
    if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
    const Histogram h = make_histogram(degrees);
    const TailView view = make_tail_view(h, first_index_at_least(h, k_min), k_min);
    if (view.n < ScanOptions{}.min_tail)
        throw InsufficientTail("power-law fit needs >= 10 tail observations, got " +
                               std::to_string(view.n));
    const PlInner inner = pl_fit_inner(view);
    PowerLawFit fit;
    fit.gamma = inner.gamma;
    fit.ks = pl_ks_inner(view, inner.gamma);
    fit.log_likelihood = inner.ll;
    fit.n_tail = view.n;
    fit.at_bound = inner.at_bound;
    return fit;
}

StretchedExpFit fit_stretched_exponential(std::span<const std::uint32_t> degrees,
                                          std::uint32_t k_min) {
    if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
    const Histogram h = make_histogram(degrees);
    const TailView view = make_tail_view(h, first_index_at_least(h, k_min), k_min);
    if (view.n < ScanOptions{}.min_tail)
        throw InsufficientTail(
            "stretched-exponential fit needs >= 10 tail observations, got " +
            std::to_string(view.n));
    const SeInner inner = se_fit_inner(view);
    StretchedExpFit fit;
    fit.params = StretchedExpParams{inner.scale, inner.shape};
    fit.log_likelihood = inner.ll;
    fit.bic = bic(inner.ll, 2, view.n);
    fit.n_tail = view.n;
    fit.converged = inner.converged;
    return fit;
}

namespace detail {

double stretched_exp_loglik(std::span<const std::uint32_t> values,
                            std::span<const std::uint64_t> counts,
                            std::uint32_t k_min, double scale, double shape) {
    if (!(scale > 0.0) || !(shape > 0.0)) return -k_inf;
    const double a0 = std::pow(static_cast<double>(k_min) / scale, shape);
    if (!std::isfinite(a0)) return -k_inf;

    long double ll = 0.0L;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = static_cast<double>(values[i]);
        const double av = std::pow(v / scale, shape);
        const double av1 = std::pow((v + 1.0) / scale, shape);
        if (!std::isfinite(av) || !std::isfinite(av1)) return -k_inf;
        const double delta = av1 - av;
        if (!(delta > 0.0)) return -k_inf;
        // ln P(v) = ln S(v) + ln(1 - e^-delta), kept stable for tiny delta
        const double log1mexp = delta > 0.6931471805599453
                                    ? std::log1p(-std::exp(-delta))
                                    : std::log(-std::expm1(-delta));
        const double lnp = (a0 - av) + log1mexp;
        if (!std::isfinite(lnp)) return -k_inf;
        ll += static_cast<long double>(counts[i]) * lnp;
    }
    return static_cast<double>(ll);
}

}  // namespace detail

TailFitReport scan_k_min(std::span<const std::uint32_t> degrees,
                         const ScanOptions& options) {
    TailFitReport rep;
    if (degrees.empty()) return rep;

    const Histogram h = make_histogram(degrees);

    struct Candidate {
        std::size_t first = 0;
        std::uint32_t k_min = 1;
        PlInner pl;
        double ks = 2.0;
    };
    std::optional<Candidate> best;

    for (std::size_t i = 0; i < h.values.size(); ++i) {
        if (h.values[i] < 1) continue;
        if (h.suffix_n[i] < options.min_tail) break;

        const TailView view = make_tail_view(h, i, h.values[i]);
        ++rep.scan_steps;

        Candidate cand;
        cand.first = i;
        cand.k_min = h.values[i];
        cand.pl = pl_fit_inner(view);
        cand.ks = pl_ks_inner(view, cand.pl.gamma);
        if (!best.has_value() || cand.ks < best->ks) best = cand;
    }

    if (!best.has_value()) {
        // Tail never reached the minimum size; report the smallest positive
        // observed degree so data_fraction is still meaningful.
        const std::size_t first = first_index_at_least(h, 1);
        rep.k_min = first < h.values.size() ? h.values[first] : 1;
        rep.data_fraction = first < h.values.size()
                                ? static_cast<double>(h.suffix_n[first]) /
                                      static_cast<double>(h.total)
                                : 0.0;
        rep.verdict = TailVerdict::inconclusive;
        return rep;
    }

    const TailView view = make_tail_view(h, best->first, best->k_min);
    rep.gamma = best->pl.gamma;
    rep.k_min = best->k_min;
    rep.data_fraction =
        static_cast<double>(view.n) / static_cast<double>(h.total);
    rep.ks_power_law = best->ks;
    rep.bic_power_law = bic(best->pl.ll, 1, view.n);

    bool se_ok = false;
    SeInner se;
    try {
        se = se_fit_inner(view);
        se_ok = true;
        rep.bic_stretched_exp = bic(se.ll, 2, view.n);
        rep.se_scale = se.scale;
        rep.se_shape = se.shape;
    } catch (const NonConvergence&) {
    }

    if (best->pl.at_bound || !se_ok) {
        rep.verdict = TailVerdict::inconclusive;
    } else if (rep.data_fraction < options.min_power_law_fraction) {
        // The best power-law stretch covers only a trivial slice of the
        // data: the distribution as observed is not scale-free.
        rep.verdict = TailVerdict::stretched_exponential;
    } else {
        const double dbic = rep.bic_stretched_exp - rep.bic_power_law;
        if (dbic >= options.bic_margin)
            rep.verdict = TailVerdict::power_law;
        else if (dbic <= -options.bic_margin)
            rep.verdict = TailVerdict::stretched_exponential;
        else
            rep.verdict = TailVerdict::inconclusive;
    }
    return rep;
}

double ks_two_sample(std::span<const std::uint32_t> a,
                     std::span<const std::uint32_t> b) {
    if (a.empty() || b.empty()) throw EmptyInput("ks_two_sample: empty sequence");
    std::vector<std::uint32_t> sa(a.begin(), a.end());
    std::vector<std::uint32_t> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double ks = 0.0;
    while (ia < sa.size() || ib < sb.size()) {
        std::uint32_t v;
        if (ia == sa.size())
            v = sb[ib];
        else if (ib == sb.size())
            v = sa[ia];
        else
            v = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] == v) ++ia;
        while (ib < sb.size() && sb[ib] == v) ++ib;
        ks = std::max(ks, std::abs(static_cast<double>(ia) / na -
                                   static_cast<double>(ib) / nb));
    }
    return ks;
}

}  // namespace rsl
